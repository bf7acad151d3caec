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

#ifndef OMISSION_LEARNERS_DECISION_TREE_HPP
#define OMISSION_LEARNERS_DECISION_TREE_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include "omission/learners/common.hpp"

namespace omission {

enum class SplitCriterion { gini, entropy };

// CART: unlimited depth, minimum 2 samples to split, best split by impurity
// decrease. Split ties go to the lowest feature index, then the lowest
// threshold, which makes the tree independent of sample order.
class DecisionTreeModel final : public Model {
 public:
  DecisionTreeModel(const Dataset& d, SplitCriterion criterion)
      : criterion_(criterion) {
    detail::require_trainable(d);
    classes_ = d.classes;
    dim_ = d.dim;
    data_ = &d;
    std::vector<int> all(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) all[i] = static_cast<int>(i);
    build(all);
    data_ = nullptr;
  }

  std::vector<double> predict_proba(const std::vector<double>& x) const override {
    check_input(x);
    int node = 0;
    while (nodes_[node].feature >= 0) {
      node = x[nodes_[node].feature] <= nodes_[node].threshold
                 ? nodes_[node].left
                 : nodes_[node].right;
    }
    const std::vector<std::int64_t>& counts = nodes_[node].counts;
    std::int64_t total = 0;
    for (std::int64_t c : counts) total += c;
    std::vector<double> proba(counts.size());
    for (std::size_t c = 0; c < counts.size(); ++c) {
      proba[c] = static_cast<double>(counts[c]) / total;
    }
    return proba;
  }

 private:
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1, right = -1;
    std::vector<std::int64_t> counts;
  };

  double impurity(const std::vector<std::int64_t>& counts, std::int64_t total) const {
    if (total == 0) return 0.0;
    double result = criterion_ == SplitCriterion::gini ? 1.0 : 0.0;
    for (std::int64_t c : counts) {
      if (c == 0) continue;
      const double p = static_cast<double>(c) / total;
      if (criterion_ == SplitCriterion::gini) {
        result -= p * p;
      } else {
        result -= p * std::log2(p);
      }
    }
    return result;
  }

  int build(const std::vector<int>& idx) {
    const int node_id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    std::vector<std::int64_t> counts(classes_.size(), 0);
    for (int i : idx) {
      ++counts[detail::class_index(classes_, data_->samples[i].label)];
    }
    const std::int64_t total = static_cast<std::int64_t>(idx.size());
    const double parent_impurity = impurity(counts, total);

    int best_feature = -1;
    double best_threshold = 0.0, best_gain = 0.0;
    if (idx.size() >= 2 && parent_impurity > 0.0) {
      std::vector<std::pair<double, int>> column(idx.size());
      for (int f = 0; f < dim_; ++f) {
        for (std::size_t i = 0; i < idx.size(); ++i) {
          const Sample& s = data_->samples[idx[i]];
          column[i] = {s.features[f], detail::class_index(classes_, s.label)};
        }
        std::sort(column.begin(), column.end());
        std::vector<std::int64_t> left(classes_.size(), 0);
        for (std::size_t i = 0; i + 1 < column.size(); ++i) {
          ++left[column[i].second];
          if (column[i].first == column[i + 1].first) continue;
          const std::int64_t nl = static_cast<std::int64_t>(i) + 1;
          const std::int64_t nr = total - nl;
          std::vector<std::int64_t> right(classes_.size());
          for (std::size_t c = 0; c < classes_.size(); ++c) {
            right[c] = counts[c] - left[c];
          }
          const double child =
              (nl * impurity(left, nl) + nr * impurity(right, nr)) / total;
          const double gain = parent_impurity - child;
          if (gain > best_gain) {
            best_gain = gain;
            best_feature = f;
            best_threshold = column[i].first +
                             (column[i + 1].first - column[i].first) / 2.0;
          }
        }
      }
    }

    if (best_feature < 0) {
      nodes_[node_id].counts = std::move(counts);
      return node_id;
    }
    std::vector<int> left_idx, right_idx;
    for (int i : idx) {
      if (data_->samples[i].features[best_feature] <= best_threshold) {
        left_idx.push_back(i);
      } else {
        right_idx.push_back(i);
      }
    }
    const int left = build(left_idx);
    const int right = build(right_idx);
    nodes_[node_id].feature = best_feature;
    nodes_[node_id].threshold = best_threshold;
    nodes_[node_id].left = left;
    nodes_[node_id].right = right;
    return node_id;
  }

  SplitCriterion criterion_;
  const Dataset* data_ = nullptr;
  std::vector<Node> nodes_;
};

}  // namespace omission

#endif  // OMISSION_LEARNERS_DECISION_TREE_HPP
