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

#ifndef OMISSION_LEARNERS_NAIVE_BAYES_HPP
#define OMISSION_LEARNERS_NAIVE_BAYES_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include "omission/learners/common.hpp"

namespace omission {

// Variance smoothing, as a fraction of the largest per-feature variance of
// the training set. Keeps near-constant features from producing infinite
// log-likelihoods.
constexpr double kGnbVarSmoothing = 1e-9;

class GaussianNbModel final : public Model {
 public:
  explicit GaussianNbModel(const Dataset& d) {
    detail::require_trainable(d);
    classes_ = d.classes;
    dim_ = d.dim;
    const std::size_t nc = classes_.size();
    const std::vector<int> order = detail::canonical_order(d);

    counts_.assign(nc, 0);
    mean_.assign(nc, std::vector<double>(dim_, 0.0));
    var_.assign(nc, std::vector<double>(dim_, 0.0));
    for (int idx : order) {
      const Sample& s = d.samples[idx];
      const int c = detail::class_index(classes_, s.label);
      ++counts_[c];
      for (int j = 0; j < dim_; ++j) mean_[c][j] += s.features[j];
    }
    for (std::size_t c = 0; c < nc; ++c) {
      for (int j = 0; j < dim_; ++j) mean_[c][j] /= counts_[c];
    }
    for (int idx : order) {
      const Sample& s = d.samples[idx];
      const int c = detail::class_index(classes_, s.label);
      for (int j = 0; j < dim_; ++j) {
        const double diff = s.features[j] - mean_[c][j];
        var_[c][j] += diff * diff;
      }
    }
    // Pooled per-feature variance drives the smoothing floor.
    std::vector<double> pooled_mean(dim_, 0.0);
    for (int idx : order) {
      for (int j = 0; j < dim_; ++j) pooled_mean[j] += d.samples[idx].features[j];
    }
    for (int j = 0; j < dim_; ++j) pooled_mean[j] /= d.size();
    double max_var = 0.0;
    {
      std::vector<double> pooled_var(dim_, 0.0);
      for (int idx : order) {
        for (int j = 0; j < dim_; ++j) {
          const double diff = d.samples[idx].features[j] - pooled_mean[j];
          pooled_var[j] += diff * diff;
        }
      }
      for (int j = 0; j < dim_; ++j) {
        max_var = std::max(max_var, pooled_var[j] / d.size());
      }
    }
    const double smoothing = max_var > 0.0 ? kGnbVarSmoothing * max_var : 1e-9;
    log_prior_.resize(nc);
    for (std::size_t c = 0; c < nc; ++c) {
      log_prior_[c] = std::log(static_cast<double>(counts_[c]) / d.size());
      for (int j = 0; j < dim_; ++j) {
        var_[c][j] = var_[c][j] / counts_[c] + smoothing;
      }
    }
  }

  std::vector<double> log_proba(const std::vector<double>& x) const override {
    check_input(x);
    std::vector<double> joint(classes_.size());
    for (std::size_t c = 0; c < classes_.size(); ++c) {
      double ll = log_prior_[c];
      for (int j = 0; j < dim_; ++j) {
        const double diff = x[j] - mean_[c][j];
        ll -= 0.5 * (std::log(2.0 * M_PI * var_[c][j]) + diff * diff / var_[c][j]);
      }
      joint[c] = ll;
    }
    detail::softmax_from_log(joint);
    return joint;
  }

  std::vector<double> predict_proba(const std::vector<double>& x) const override {
    std::vector<double> lp = log_proba(x);
    for (double& v : lp) v = std::exp(v);
    return lp;
  }

 private:
  std::vector<std::int64_t> counts_;
  std::vector<double> log_prior_;
  std::vector<std::vector<double>> mean_;
  std::vector<std::vector<double>> var_;
};

constexpr int kMultinomialBins = 16;

// Multinomial naive Bayes over binned features: each feature is quantized to
// an integer in [0, 16) over its observed training range and treated as a
// count. Laplace smoothing with alpha = 1.
class MultinomialNbModel final : public Model {
 public:
  explicit MultinomialNbModel(const Dataset& d) {
    detail::require_trainable(d);
    classes_ = d.classes;
    dim_ = d.dim;
    const std::size_t nc = classes_.size();

    lo_.assign(dim_, std::numeric_limits<double>::infinity());
    hi_.assign(dim_, -std::numeric_limits<double>::infinity());
    for (const Sample& s : d.samples) {
      for (int j = 0; j < dim_; ++j) {
        lo_[j] = std::min(lo_[j], s.features[j]);
        hi_[j] = std::max(hi_[j], s.features[j]);
      }
    }

    std::vector<std::vector<std::int64_t>> feature_counts(
        nc, std::vector<std::int64_t>(dim_, 0));
    std::vector<std::int64_t> class_counts(nc, 0);
    for (const Sample& s : d.samples) {
      const int c = detail::class_index(classes_, s.label);
      ++class_counts[c];
      for (int j = 0; j < dim_; ++j) {
        feature_counts[c][j] += bin(s.features[j], j);
      }
    }
    log_prior_.resize(nc);
    log_theta_.assign(nc, std::vector<double>(dim_));
    for (std::size_t c = 0; c < nc; ++c) {
      log_prior_[c] = std::log(static_cast<double>(class_counts[c]) / d.size());
      std::int64_t total = 0;
      for (int j = 0; j < dim_; ++j) total += feature_counts[c][j];
      const double denom = static_cast<double>(total + dim_);
      for (int j = 0; j < dim_; ++j) {
        log_theta_[c][j] = std::log((feature_counts[c][j] + 1.0) / denom);
      }
    }
  }

  std::vector<double> log_proba(const std::vector<double>& x) const override {
    check_input(x);
    std::vector<double> joint(classes_.size());
    for (std::size_t c = 0; c < classes_.size(); ++c) {
      double ll = log_prior_[c];
      for (int j = 0; j < dim_; ++j) {
        ll += bin(x[j], j) * log_theta_[c][j];
      }
      joint[c] = ll;
    }
    detail::softmax_from_log(joint);
    return joint;
  }

  std::vector<double> predict_proba(const std::vector<double>& x) const override {
    std::vector<double> lp = log_proba(x);
    for (double& v : lp) v = std::exp(v);
    return lp;
  }

 private:
  int bin(double v, int j) const {
    if (!(hi_[j] > lo_[j])) return 0;
    const double t = (v - lo_[j]) / (hi_[j] - lo_[j]) * kMultinomialBins;
    return std::clamp(static_cast<int>(t), 0, kMultinomialBins - 1);
  }

  std::vector<double> lo_, hi_;
  std::vector<double> log_prior_;
  std::vector<std::vector<double>> log_theta_;
};

}  // namespace omission

#endif  // OMISSION_LEARNERS_NAIVE_BAYES_HPP
