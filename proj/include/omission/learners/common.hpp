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

#ifndef OMISSION_LEARNERS_COMMON_HPP
#define OMISSION_LEARNERS_COMMON_HPP

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>
#include <vector>

#include "omission/dataset.hpp"
#include "omission/errors.hpp"

namespace omission {

// Trained classifier interface. predict_proba returns a valid distribution
// over class_ids(); log_proba returns its logarithm, computed without
// intermediate underflow where the model family allows it.
class Model {
 public:
  virtual ~Model() = default;

  virtual std::vector<double> predict_proba(const std::vector<double>& x) const = 0;

  virtual std::vector<double> log_proba(const std::vector<double>& x) const {
    std::vector<double> p = predict_proba(x);
    for (double& v : p) v = std::log(v);
    return p;
  }

  const std::vector<int>& class_ids() const { return classes_; }
  int dim() const { return dim_; }

 protected:
  void check_input(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != dim_) {
      throw ValidationError("input has dimension " + std::to_string(x.size()) +
                            ", model expects " + std::to_string(dim_));
    }
  }

  std::vector<int> classes_;
  int dim_ = 0;
};

namespace detail {

// Canonical sample order: by raw feature bytes, then label, then id.
// Identical samples are interchangeable, so accumulating in this order makes
// training independent of the dataset's sample order.
inline std::vector<int> canonical_order(const Dataset& d) {
  std::vector<int> order(d.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t bytes = std::size_t(d.dim) * sizeof(double);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const int c = std::memcmp(d.samples[a].features.data(),
                              d.samples[b].features.data(), bytes);
    if (c != 0) return c < 0;
    if (d.samples[a].label != d.samples[b].label)
      return d.samples[a].label < d.samples[b].label;
    return d.samples[a].id < d.samples[b].id;
  });
  return order;
}

inline int class_index(const std::vector<int>& classes, int label) {
  const auto it = std::lower_bound(classes.begin(), classes.end(), label);
  if (it == classes.end() || *it != label) return -1;
  return static_cast<int>(it - classes.begin());
}

inline double log_sum_exp(const std::vector<double>& v) {
  const double m = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

// Normalizes log scores in place to log probabilities and also returns the
// probability vector.
inline std::vector<double> softmax_from_log(std::vector<double>& log_scores) {
  const double lse = log_sum_exp(log_scores);
  std::vector<double> proba(log_scores.size());
  for (std::size_t i = 0; i < log_scores.size(); ++i) {
    log_scores[i] -= lse;
    proba[i] = std::exp(log_scores[i]);
  }
  return proba;
}

inline double squared_distance(const std::vector<double>& a,
                               const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    s += diff * diff;
  }
  return s;
}

inline void require_trainable(const Dataset& d) {
  if (d.empty()) throw TrainingError("cannot fit on an empty dataset");
  if (d.classes.empty()) throw TrainingError("dataset has no classes");
}

}  // namespace detail
}  // namespace omission

#endif  // OMISSION_LEARNERS_COMMON_HPP
