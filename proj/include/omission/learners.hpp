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

#ifndef OMISSION_LEARNERS_HPP
#define OMISSION_LEARNERS_HPP

#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "omission/dataset.hpp"
#include "omission/learners/common.hpp"
#include "omission/learners/decision_tree.hpp"
#include "omission/learners/knn.hpp"
#include "omission/learners/mlp.hpp"
#include "omission/learners/naive_bayes.hpp"
#include "omission/learners/svm.hpp"

namespace omission {

enum class LearnerKind {
  knn,
  gnb,
  multinomial_nb,
  svm_linear,
  svm_poly,
  dtree_gini,
  dtree_entropy,
  mlp,
};

inline const char* to_string(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::knn: return "knn";
    case LearnerKind::gnb: return "gnb";
    case LearnerKind::multinomial_nb: return "multinomial_nb";
    case LearnerKind::svm_linear: return "svm_linear";
    case LearnerKind::svm_poly: return "svm_poly";
    case LearnerKind::dtree_gini: return "dtree_gini";
    case LearnerKind::dtree_entropy: return "dtree_entropy";
    case LearnerKind::mlp: return "mlp";
  }
  return "?";
}

struct LearnerSpec {
  LearnerKind kind = LearnerKind::knn;
  int k = 5;                        // knn neighbors
  int degree = 3;                   // svm_poly degree
  std::vector<int> hidden{16, 16};  // mlp hidden widths
  int epochs = 200;                 // mlp
  double learning_rate = 0.01;      // mlp
  std::uint64_t seed = 0;           // mlp init seed

  void validate() const {
    switch (kind) {
      case LearnerKind::knn:
        if (k < 1) throw ValidationError("knn: k must be >= 1");
        break;
      case LearnerKind::svm_poly:
        if (degree < 1) throw ValidationError("svm_poly: degree must be >= 1");
        break;
      case LearnerKind::mlp:
        if (hidden.empty()) throw ValidationError("mlp: hidden widths required");
        for (int h : hidden) {
          if (h < 1) throw ValidationError("mlp: hidden widths must be >= 1");
        }
        if (epochs < 1) throw ValidationError("mlp: epochs must be >= 1");
        if (!(learning_rate > 0.0)) {
          throw ValidationError("mlp: learning rate must be positive");
        }
        break;
      default:
        break;
    }
  }

  static LearnerSpec Knn(int k = 5) {
    LearnerSpec s;
    s.kind = LearnerKind::knn;
    s.k = k;
    return s;
  }
  static LearnerSpec Gnb() {
    LearnerSpec s;
    s.kind = LearnerKind::gnb;
    return s;
  }
  static LearnerSpec MultinomialNb() {
    LearnerSpec s;
    s.kind = LearnerKind::multinomial_nb;
    return s;
  }
  static LearnerSpec SvmLinear() {
    LearnerSpec s;
    s.kind = LearnerKind::svm_linear;
    return s;
  }
  static LearnerSpec SvmPoly(int degree = 3) {
    LearnerSpec s;
    s.kind = LearnerKind::svm_poly;
    s.degree = degree;
    return s;
  }
  static LearnerSpec DtreeGini() {
    LearnerSpec s;
    s.kind = LearnerKind::dtree_gini;
    return s;
  }
  static LearnerSpec DtreeEntropy() {
    LearnerSpec s;
    s.kind = LearnerKind::dtree_entropy;
    return s;
  }
  static LearnerSpec Mlp(std::vector<int> hidden = {16, 16}, int epochs = 200,
                         double learning_rate = 0.01, std::uint64_t seed = 0) {
    LearnerSpec s;
    s.kind = LearnerKind::mlp;
    s.hidden = std::move(hidden);
    s.epochs = epochs;
    s.learning_rate = learning_rate;
    s.seed = seed;
    return s;
  }
};

// Immutable trained model plus a fingerprint of the data it was fit on.
struct ModelHandle {
  std::shared_ptr<const Model> model;
  std::uint64_t fingerprint = 0;

  const std::vector<int>& classes() const { return model->class_ids(); }
  int dim() const { return model->dim(); }
};

namespace detail {

inline std::uint64_t fingerprint(const Dataset& d) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const void* data, std::size_t len) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 0x100000001b3ULL;
    }
  };
  mix(&d.dim, sizeof(d.dim));
  for (const Sample& s : d.samples) {
    mix(s.features.data(), s.features.size() * sizeof(double));
    mix(&s.label, sizeof(s.label));
  }
  return h;
}

}  // namespace detail

inline ModelHandle fit(const LearnerSpec& spec, const Dataset& d) {
  spec.validate();
  detail::require_trainable(d);
  std::shared_ptr<const Model> model;
  switch (spec.kind) {
    case LearnerKind::knn:
      model = std::make_shared<KnnModel>(d, spec.k);
      break;
    case LearnerKind::gnb:
      model = std::make_shared<GaussianNbModel>(d);
      break;
    case LearnerKind::multinomial_nb:
      model = std::make_shared<MultinomialNbModel>(d);
      break;
    case LearnerKind::svm_linear:
      model = std::make_shared<LinearSvmModel>(d);
      break;
    case LearnerKind::svm_poly:
      model = std::make_shared<PolySvmModel>(d, spec.degree);
      break;
    case LearnerKind::dtree_gini:
      model = std::make_shared<DecisionTreeModel>(d, SplitCriterion::gini);
      break;
    case LearnerKind::dtree_entropy:
      model = std::make_shared<DecisionTreeModel>(d, SplitCriterion::entropy);
      break;
    case LearnerKind::mlp:
      model = std::make_shared<MlpModel>(d, spec.hidden, spec.epochs,
                                         spec.learning_rate, spec.seed);
      break;
  }
  return {std::move(model), detail::fingerprint(d)};
}

inline std::vector<double> predict_proba(const ModelHandle& m,
                                         const std::vector<double>& x) {
  return m.model->predict_proba(x);
}

// Argmax of predict_proba; ties go to the lowest class id.
inline int predict(const ModelHandle& m, const std::vector<double>& x) {
  const std::vector<double> proba = m.model->predict_proba(x);
  std::size_t best = 0;
  for (std::size_t c = 1; c < proba.size(); ++c) {
    if (proba[c] > proba[best]) best = c;
  }
  return m.classes()[best];
}

// log P(class | x), computed in log space so that ranking candidates stays
// informative even when the probability itself underflows. Returns -inf for
// classes the model never saw.
inline double log_score(const ModelHandle& m, const std::vector<double>& x,
                        int class_id) {
  const int idx = detail::class_index(m.classes(), class_id);
  if (idx < 0) return -std::numeric_limits<double>::infinity();
  return m.model->log_proba(x)[idx];
}

inline double accuracy(const ModelHandle& m, const Dataset& d) {
  if (d.empty()) throw ValidationError("accuracy: dataset is empty");
  std::size_t correct = 0;
  for (const Sample& s : d.samples) {
    if (predict(m, s.features) == s.label) ++correct;
  }
  return static_cast<double>(correct) / d.size();
}

}  // namespace omission

#endif  // OMISSION_LEARNERS_HPP
