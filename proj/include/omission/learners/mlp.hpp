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

#ifndef OMISSION_LEARNERS_MLP_HPP
#define OMISSION_LEARNERS_MLP_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include "omission/learners/common.hpp"
#include "omission/rng.hpp"

namespace omission {

// Fully connected ReLU network with a softmax head, trained by full-batch
// gradient descent on the cross entropy. Xavier-uniform init from the spec
// seed; batch sums run in canonical sample order.
class MlpModel final : public Model {
 public:
  MlpModel(const Dataset& d, const std::vector<int>& hidden, int epochs,
           double learning_rate, std::uint64_t seed) {
    detail::require_trainable(d);
    if (hidden.empty()) throw ValidationError("mlp needs at least one hidden layer");
    classes_ = d.classes;
    dim_ = d.dim;

    std::vector<int> dims;
    dims.push_back(dim_);
    for (int h : hidden) {
      if (h <= 0) throw ValidationError("mlp hidden width must be positive");
      dims.push_back(h);
    }
    dims.push_back(static_cast<int>(classes_.size()));
    const std::size_t layers = dims.size() - 1;

    Rng rng(seed);
    w_.resize(layers);
    b_.resize(layers);
    for (std::size_t l = 0; l < layers; ++l) {
      const int fan_in = dims[l], fan_out = dims[l + 1];
      const double limit = std::sqrt(6.0 / (fan_in + fan_out));
      w_[l].assign(std::size_t(fan_in) * fan_out, 0.0);
      for (double& v : w_[l]) v = (2.0 * rng.uniform() - 1.0) * limit;
      b_[l].assign(fan_out, 0.0);
    }
    dims_ = dims;

    const std::vector<int> order = detail::canonical_order(d);
    const std::size_t n = order.size();
    const double inv_n = 1.0 / static_cast<double>(n);

    std::vector<std::vector<double>> acts(layers + 1);
    std::vector<std::vector<double>> grad_w(layers), grad_b(layers), delta(layers);
    for (int epoch = 0; epoch < epochs; ++epoch) {
      for (std::size_t l = 0; l < layers; ++l) {
        grad_w[l].assign(w_[l].size(), 0.0);
        grad_b[l].assign(b_[l].size(), 0.0);
      }
      for (int idx : order) {
        const Sample& s = d.samples[idx];
        forward(s.features, acts);
        // softmax + cross entropy gradient at the output
        std::vector<double>& out = acts[layers];
        const double lse = detail::log_sum_exp(out);
        std::vector<double>& dout = delta[layers - 1];
        dout.resize(out.size());
        const int target = detail::class_index(classes_, s.label);
        for (std::size_t c = 0; c < out.size(); ++c) {
          dout[c] = std::exp(out[c] - lse) - (static_cast<int>(c) == target);
        }
        for (std::size_t l = layers; l-- > 0;) {
          const std::vector<double>& in = acts[l];
          const std::vector<double>& dl = delta[l];
          for (int i = 0; i < dims_[l]; ++i) {
            for (int o = 0; o < dims_[l + 1]; ++o) {
              grad_w[l][std::size_t(i) * dims_[l + 1] + o] += in[i] * dl[o];
            }
          }
          for (int o = 0; o < dims_[l + 1]; ++o) grad_b[l][o] += dl[o];
          if (l == 0) break;
          std::vector<double>& prev = delta[l - 1];
          prev.assign(dims_[l], 0.0);
          for (int i = 0; i < dims_[l]; ++i) {
            if (acts[l][i] <= 0.0) continue;  // ReLU derivative
            double acc = 0.0;
            for (int o = 0; o < dims_[l + 1]; ++o) {
              acc += w_[l][std::size_t(i) * dims_[l + 1] + o] * dl[o];
            }
            prev[i] = acc;
          }
        }
      }
      for (std::size_t l = 0; l < layers; ++l) {
        for (std::size_t i = 0; i < w_[l].size(); ++i) {
          w_[l][i] -= learning_rate * inv_n * grad_w[l][i];
        }
        for (std::size_t i = 0; i < b_[l].size(); ++i) {
          b_[l][i] -= learning_rate * inv_n * grad_b[l][i];
        }
      }
    }
  }

  std::vector<double> log_proba(const std::vector<double>& x) const override {
    check_input(x);
    std::vector<std::vector<double>> acts;
    forward(x, acts);
    std::vector<double> scores = acts.back();
    detail::softmax_from_log(scores);
    return scores;
  }

  std::vector<double> predict_proba(const std::vector<double>& x) const override {
    std::vector<double> lp = log_proba(x);
    for (double& v : lp) v = std::exp(v);
    return lp;
  }

 private:
  void forward(const std::vector<double>& x,
               std::vector<std::vector<double>>& acts) const {
    const std::size_t layers = w_.size();
    acts.resize(layers + 1);
    acts[0] = x;
    for (std::size_t l = 0; l < layers; ++l) {
      std::vector<double>& out = acts[l + 1];
      out.assign(dims_[l + 1], 0.0);
      for (int o = 0; o < dims_[l + 1]; ++o) out[o] = b_[l][o];
      for (int i = 0; i < dims_[l]; ++i) {
        const double v = acts[l][i];
        if (v == 0.0) continue;
        for (int o = 0; o < dims_[l + 1]; ++o) {
          out[o] += v * w_[l][std::size_t(i) * dims_[l + 1] + o];
        }
      }
      if (l + 1 < layers) {
        for (double& v : out) v = std::max(0.0, v);  // ReLU
      }
    }
  }

  std::vector<int> dims_;
  std::vector<std::vector<double>> w_;
  std::vector<std::vector<double>> b_;
};

}  // namespace omission

#endif  // OMISSION_LEARNERS_MLP_HPP
