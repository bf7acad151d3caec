// Copyright 2026 The omission-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OMISSION_LEARNERS_KNN_HPP
#define OMISSION_LEARNERS_KNN_HPP

#include <cstring>
#include <vector>

#include "omission/learners/common.hpp"

namespace omission {

// Majority vote over the k nearest training points (Euclidean). Distance
// ties are resolved by feature bytes then label, which keeps predictions
// independent of training sample order.
class KnnModel final : public Model {
 public:
  KnnModel(const Dataset& d, int k) : k_(k) {
    detail::require_trainable(d);
    classes_ = d.classes;
    dim_ = d.dim;
    points_.reserve(d.size());
    labels_.reserve(d.size());
    for (int idx : detail::canonical_order(d)) {
      points_.push_back(d.samples[idx].features);
      labels_.push_back(d.samples[idx].label);
    }
  }

  std::vector<double> predict_proba(const std::vector<double>& x) const override {
    check_input(x);
    const std::size_t m = std::min<std::size_t>(k_, points_.size());
    std::vector<std::pair<double, int>> dist(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) {
      dist[i] = {detail::squared_distance(points_[i], x), static_cast<int>(i)};
    }
    const std::size_t bytes = std::size_t(dim_) * sizeof(double);
    std::partial_sort(dist.begin(), dist.begin() + m, dist.end(),
                      [&](const auto& a, const auto& b) {
                        if (a.first != b.first) return a.first < b.first;
                        const int c = std::memcmp(points_[a.second].data(),
                                                  points_[b.second].data(), bytes);
                        if (c != 0) return c < 0;
                        return labels_[a.second] < labels_[b.second];
                      });
    std::vector<double> proba(classes_.size(), 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      proba[detail::class_index(classes_, labels_[dist[i].second])] += 1.0;
    }
    for (double& p : proba) p /= static_cast<double>(m);
    return proba;
  }

 private:
  int k_;
  std::vector<std::vector<double>> points_;
  std::vector<int> labels_;
};

}  // namespace omission

#endif  // OMISSION_LEARNERS_KNN_HPP
