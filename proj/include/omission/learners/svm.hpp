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

#ifndef OMISSION_LEARNERS_SVM_HPP
#define OMISSION_LEARNERS_SVM_HPP

#include <cmath>
#include <vector>

#include "omission/learners/common.hpp"

namespace omission {

constexpr int kSvmEpochs = 200;
constexpr double kSvmLearningRate = 0.01;
constexpr double kSvmRegularization = 1e-3;

// One-vs-rest linear SVM trained by full-batch subgradient descent on the
// hinge loss. Probabilities come from a softmax over the per-class margins,
// so for two classes P(predicted) = sigmoid(margin difference).
class LinearSvmModel final : public Model {
 public:
  explicit LinearSvmModel(const Dataset& d) {
    detail::require_trainable(d);
    classes_ = d.classes;
    dim_ = d.dim;
    const std::vector<int> order = detail::canonical_order(d);
    const std::size_t n = d.size();
    const double inv_n = 1.0 / static_cast<double>(n);

    weights_.assign(classes_.size(), std::vector<double>(dim_, 0.0));
    bias_.assign(classes_.size(), 0.0);
    for (std::size_t c = 0; c < classes_.size(); ++c) {
      std::vector<double>& w = weights_[c];
      double& b = bias_[c];
      for (int epoch = 0; epoch < kSvmEpochs; ++epoch) {
        std::vector<double> grad_w(dim_, 0.0);
        double grad_b = 0.0;
        for (int idx : order) {
          const Sample& s = d.samples[idx];
          const double y = s.label == classes_[c] ? 1.0 : -1.0;
          double margin = b;
          for (int j = 0; j < dim_; ++j) margin += w[j] * s.features[j];
          if (y * margin < 1.0) {
            for (int j = 0; j < dim_; ++j) grad_w[j] -= y * s.features[j];
            grad_b -= y;
          }
        }
        for (int j = 0; j < dim_; ++j) {
          w[j] -= kSvmLearningRate * (kSvmRegularization * w[j] + inv_n * grad_w[j]);
        }
        b -= kSvmLearningRate * inv_n * grad_b;
      }
    }
  }

  double decision(const std::vector<double>& x, std::size_t c) const {
    double v = bias_[c];
    for (int j = 0; j < dim_; ++j) v += weights_[c][j] * x[j];
    return v;
  }

  std::vector<double> log_proba(const std::vector<double>& x) const override {
    check_input(x);
    std::vector<double> scores(classes_.size());
    for (std::size_t c = 0; c < classes_.size(); ++c) scores[c] = decision(x, c);
    detail::softmax_from_log(scores);
    return scores;
  }

  std::vector<double> predict_proba(const std::vector<double>& x) const override {
    std::vector<double> lp = log_proba(x);
    for (double& v : lp) v = std::exp(v);
    return lp;
  }

 private:
  std::vector<std::vector<double>> weights_;
  std::vector<double> bias_;
};

// One-vs-rest kernel SVM with polynomial kernel (gamma * <x,z> + 1)^degree.
// Trained with the same batch subgradient scheme expressed in the dual
// coefficients; gamma follows the common 1 / (dim * var) scaling.
class PolySvmModel final : public Model {
 public:
  PolySvmModel(const Dataset& d, int degree) : degree_(degree) {
    detail::require_trainable(d);
    classes_ = d.classes;
    dim_ = d.dim;
    const std::vector<int> order = detail::canonical_order(d);
    const std::size_t n = d.size();
    const double inv_n = 1.0 / static_cast<double>(n);

    points_.reserve(n);
    labels_.reserve(n);
    for (int idx : order) {
      points_.push_back(d.samples[idx].features);
      labels_.push_back(d.samples[idx].label);
    }

    double mean = 0.0, var = 0.0;
    for (const auto& p : points_) {
      for (double v : p) mean += v;
    }
    mean /= static_cast<double>(n * dim_);
    for (const auto& p : points_) {
      for (double v : p) var += (v - mean) * (v - mean);
    }
    var /= static_cast<double>(n * dim_);
    gamma_ = var > 0.0 ? 1.0 / (dim_ * var) : 1.0;

    std::vector<double> gram(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        const double k = kernel(points_[i], points_[j]);
        gram[i * n + j] = k;
        gram[j * n + i] = k;
      }
    }

    beta_.assign(classes_.size(), std::vector<double>(n, 0.0));
    bias_.assign(classes_.size(), 0.0);
    std::vector<double> f(n);
    for (std::size_t c = 0; c < classes_.size(); ++c) {
      std::vector<double>& beta = beta_[c];
      double& b = bias_[c];
      for (int epoch = 0; epoch < kSvmEpochs; ++epoch) {
        for (std::size_t i = 0; i < n; ++i) {
          double acc = b;
          for (std::size_t j = 0; j < n; ++j) acc += beta[j] * gram[i * n + j];
          f[i] = acc;
        }
        const double shrink = 1.0 - kSvmLearningRate * kSvmRegularization;
        for (double& v : beta) v *= shrink;
        double grad_b = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double y = labels_[i] == classes_[c] ? 1.0 : -1.0;
          if (y * f[i] < 1.0) {
            beta[i] += kSvmLearningRate * inv_n * y;
            grad_b += y;
          }
        }
        b += kSvmLearningRate * inv_n * grad_b;
      }
    }
  }

  double decision(const std::vector<double>& x, std::size_t c) const {
    double v = bias_[c];
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (beta_[c][i] != 0.0) v += beta_[c][i] * kernel(points_[i], x);
    }
    return v;
  }

  std::vector<double> log_proba(const std::vector<double>& x) const override {
    check_input(x);
    std::vector<double> scores(classes_.size());
    for (std::size_t c = 0; c < classes_.size(); ++c) scores[c] = decision(x, c);
    detail::softmax_from_log(scores);
    return scores;
  }

  std::vector<double> predict_proba(const std::vector<double>& x) const override {
    std::vector<double> lp = log_proba(x);
    for (double& v : lp) v = std::exp(v);
    return lp;
  }

 private:
  double kernel(const std::vector<double>& a, const std::vector<double>& b) const {
    double dot = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) dot += a[j] * b[j];
    double base = gamma_ * dot + 1.0;
    double out = 1.0;
    for (int i = 0; i < degree_; ++i) out *= base;
    return out;
  }

  int degree_;
  double gamma_ = 1.0;
  std::vector<std::vector<double>> points_;
  std::vector<int> labels_;
  std::vector<std::vector<double>> beta_;
  std::vector<double> bias_;
};

}  // namespace omission

#endif  // OMISSION_LEARNERS_SVM_HPP
