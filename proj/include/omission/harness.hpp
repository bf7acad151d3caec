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

#ifndef OMISSION_HARNESS_HPP
#define OMISSION_HARNESS_HPP

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "omission/attacks.hpp"
#include "omission/dataset.hpp"
#include "omission/learners.hpp"
#include "omission/parallel.hpp"

namespace omission {

// Calibrated defaults for the two-blob experiments: moderately overlapping
// classes and a target placed on the src side of the center segment.
constexpr double kDefaultTargetFraction = 0.45;
constexpr int kDefaultValidationPerClass = 100;
constexpr int kDefaultTargetPoolPerClass = 50;

struct SyntheticDataSpec {
  int n = 400;
  std::array<double, 2> center_src{0.0, 0.0};
  std::array<double, 2> center_trgt{2.0, 2.0};
  double sigma = 1.0;
  double target_fraction = kDefaultTargetFraction;
  int validation_per_class = kDefaultValidationPerClass;
};

struct MnistDataSpec {
  std::string images_path;
  std::string labels_path;  // empty when images_path is a CSV file
  bool csv = false;
  std::vector<int> class_pool{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  int classes_per_instance = 2;  // random draw from class_pool per instance
  std::optional<std::pair<int, int>> fixed_pair;  // overrides the random draw
  int per_class = 200;
  int target_pool_per_class = kDefaultTargetPoolPerClass;
  int validation_per_class = kDefaultValidationPerClass;
};

// Explicit tiny dataset, mostly for hand-built scenarios.
struct InlineDataSpec {
  std::vector<Sample> samples;
  std::vector<double> target;
  int src = 0;
  int trgt = 1;
};

using DataSpec = std::variant<SyntheticDataSpec, MnistDataSpec, InlineDataSpec>;

enum class AttackMethod { knn, greedy, genetic };

inline const char* to_string(AttackMethod m) {
  switch (m) {
    case AttackMethod::knn: return "knn";
    case AttackMethod::greedy: return "greedy";
    case AttackMethod::genetic: return "genetic";
  }
  return "?";
}

constexpr int kDefaultGenerations = 50;
constexpr int kDefaultOffspring = 10;

struct AttackMethodConfig {
  AttackMethod method = AttackMethod::genetic;
  DistanceMetric metric = DistanceMetric::euclidean;  // knn method only
  int generations = kDefaultGenerations;              // genetic only
  int offspring = kDefaultOffspring;                  // genetic only
};

enum class AttackMode { white_box, black_box };

inline const char* to_string(AttackMode m) {
  return m == AttackMode::white_box ? "white_box" : "black_box";
}

struct ExperimentConfig {
  DataSpec dataset;
  LearnerSpec victim;
  AttackMethodConfig attack;
  AttackMode mode = AttackMode::white_box;
  int budget_k = 20;
  int repeats = 50;
  double alpha = 0.05;
  std::uint64_t base_seed = 0;
  int jobs = 1;

  std::size_t training_size() const {
    if (const auto* s = std::get_if<SyntheticDataSpec>(&dataset)) return s->n;
    if (const auto* m = std::get_if<MnistDataSpec>(&dataset)) {
      return std::size_t(m->per_class) *
             (m->fixed_pair ? 2 : m->classes_per_instance);
    }
    return std::get<InlineDataSpec>(dataset).samples.size();
  }

  void validate() const {
    victim.validate();
    if (repeats < 1) throw ConfigError("repeats must be >= 1");
    if (budget_k < 0) throw ConfigError("budget must be non-negative");
    if (!(alpha > 0.0)) throw ConfigError("alpha must be positive");
    const std::size_t n = training_size();
    if (budget_k > static_cast<int>(std::floor(std::sqrt(double(n))))) {
      throw ConfigError("budget rule violated: k = " + std::to_string(budget_k) +
                        " exceeds floor(sqrt(|S|)) = " +
                        std::to_string(int(std::floor(std::sqrt(double(n))))));
    }
    if (const auto* m = std::get_if<MnistDataSpec>(&dataset)) {
      if (m->class_pool.size() < 2) throw ConfigError("class pool needs >= 2 classes");
      std::vector<int> p = m->class_pool;
      std::sort(p.begin(), p.end());
      if (std::adjacent_find(p.begin(), p.end()) != p.end()) {
        throw ConfigError("class pool contains a duplicate class");
      }
      if (!m->fixed_pair &&
          (m->classes_per_instance < 2 ||
           m->classes_per_instance > static_cast<int>(m->class_pool.size()))) {
        throw ConfigError("classes_per_instance out of range");
      }
    }
  }
};

// Black-box surrogate table: the attacker deliberately shifts one
// hyperparameter away from the victim configuration.
inline LearnerSpec surrogate_for(const LearnerSpec& victim) {
  switch (victim.kind) {
    case LearnerKind::knn:
      return LearnerSpec::Knn(3);
    case LearnerKind::gnb:
      return LearnerSpec::MultinomialNb();
    case LearnerKind::svm_linear:
      return LearnerSpec::SvmPoly(3);
    case LearnerKind::dtree_gini:
      return LearnerSpec::DtreeEntropy();
    case LearnerKind::mlp:
      return LearnerSpec::Mlp({8, 8}, victim.epochs, victim.learning_rate,
                              victim.seed);
    default:
      throw ConfigError(std::string("no surrogate defined for victim kind ") +
                        to_string(victim.kind));
  }
}

struct InstanceOutcome {
  std::uint64_t seed = 0;
  int src = 0;
  int trgt = 1;
  int pre_label = -1;
  int post_label = -1;
  bool success = false;
  double acc_pre = 0.0;
  double acc_post = 0.0;
  double acc_delta = 0.0;
  std::vector<int> removed_ids;
  long long evaluations = 0;
  double wall_ms = 0.0;
  bool failed_setup = false;
  int attempts = 1;
};

struct SuccessReport {
  std::vector<InstanceOutcome> outcomes;
  int completed = 0;
  int failed_setup = 0;
  int successes = 0;
  double success_rate = 0.0;
  double mean_abs_delta = 0.0;
  double fraction_within_alpha = 0.0;  // |ΔAc| < alpha among completed
  ExperimentConfig config;
};

namespace detail {

struct InstanceData {
  Dataset train;
  Dataset target_pool;
  Dataset validation;
  int src = 0;
  int trgt = 1;
};

inline InstanceData build_synthetic_instance(const SyntheticDataSpec& spec,
                                             std::uint64_t seed) {
  SyntheticSpec gen;
  gen.n = spec.n;
  gen.center_src = spec.center_src;
  gen.center_trgt = spec.center_trgt;
  gen.sigma = spec.sigma;

  InstanceData data;
  gen.seed = derive_seed(seed, 1);
  data.train = gen_synthetic(gen);

  // the target is the fixed placement point; selection only validates it
  Sample target = synthetic_target(gen, spec.target_fraction);
  data.target_pool = make_dataset({target}, 2);

  SyntheticSpec val = gen;
  val.n = 2 * spec.validation_per_class;
  val.seed = derive_seed(seed, 2);
  data.validation = gen_synthetic(val);
  data.src = kSyntheticSrcLabel;
  data.trgt = kSyntheticTrgtLabel;
  return data;
}

inline InstanceData build_mnist_instance(const MnistDataSpec& spec,
                                         const Dataset& pool,
                                         std::uint64_t seed) {
  Rng rng(derive_seed(seed, 3));
  InstanceData data;
  std::vector<int> chosen;
  if (spec.fixed_pair) {
    data.src = spec.fixed_pair->first;
    data.trgt = spec.fixed_pair->second;
    chosen = {data.src, data.trgt};
  } else {
    std::vector<int> classes = spec.class_pool;
    rng.shuffle(classes);
    chosen.assign(classes.begin(), classes.begin() + spec.classes_per_instance);
    data.src = chosen[0];
    data.trgt = chosen[1];
  }
  std::vector<int> sorted_classes = chosen;
  std::sort(sorted_classes.begin(), sorted_classes.end());
  std::vector<Dataset> parts = split_per_class(
      pool, sorted_classes,
      {std::size_t(spec.per_class), std::size_t(spec.target_pool_per_class),
       std::size_t(spec.validation_per_class)},
      derive_seed(seed, 4));
  data.train = std::move(parts[0]);
  data.target_pool = std::move(parts[1]);
  data.validation = std::move(parts[2]);
  return data;
}

inline InstanceData build_inline_instance(const InlineDataSpec& spec) {
  if (spec.samples.empty()) throw ConfigError("inline dataset is empty");
  InstanceData data;
  const int dim = static_cast<int>(spec.samples.front().features.size());
  data.train = make_dataset(spec.samples, dim);
  Sample target;
  target.features = spec.target;
  target.label = spec.src;
  data.target_pool = make_dataset({target}, dim);
  data.validation = data.train;  // no held-out pool for hand-built data
  data.src = spec.src;
  data.trgt = spec.trgt;
  return data;
}

}  // namespace detail

// Draws from the target pool in seeded order and returns the first sample
// with true label `src` that the model also classifies as `src`.
inline Sample select_target(const Dataset& pool, const ModelHandle& model,
                            int src, std::uint64_t seed) {
  std::vector<int> order;
  for (const Sample& s : pool.samples) {
    if (s.label == src) order.push_back(s.id);
  }
  if (order.empty()) {
    throw SelectionExhaustedError("target pool has no samples labeled " +
                                  std::to_string(src));
  }
  Rng rng(seed);
  rng.shuffle(order);
  for (int id : order) {
    const Sample& candidate = pool.samples[id];
    if (predict(model, candidate.features) == src) return candidate;
  }
  throw SelectionExhaustedError(
      "no target candidate is classified as class " + std::to_string(src));
}

// One experiment instance: build data, fit, pick target, attack, refit.
// Setup failures (target selection, attack errors) are retried with fresh
// seeds up to 3 times, then reported as failed_setup.
inline InstanceOutcome run_instance(const ExperimentConfig& config,
                                    std::uint64_t instance_seed,
                                    const Dataset* mnist_pool = nullptr) {
  constexpr int kSetupAttempts = 3;
  InstanceOutcome outcome;
  outcome.seed = instance_seed;
  for (int attempt = 0; attempt < kSetupAttempts; ++attempt) {
    outcome.attempts = attempt + 1;
    const std::uint64_t seed = derive_seed(instance_seed, attempt);
    try {
      detail::InstanceData data;
      if (const auto* s = std::get_if<SyntheticDataSpec>(&config.dataset)) {
        data = detail::build_synthetic_instance(*s, seed);
      } else if (const auto* m = std::get_if<MnistDataSpec>(&config.dataset)) {
        if (mnist_pool == nullptr) {
          throw ConfigError("mnist experiment requires a loaded data pool");
        }
        data = detail::build_mnist_instance(*m, *mnist_pool, seed);
      } else {
        data = detail::build_inline_instance(std::get<InlineDataSpec>(config.dataset));
      }

      const auto start = std::chrono::steady_clock::now();
      const ModelHandle victim = fit(config.victim, data.train);
      const Sample target =
          select_target(data.target_pool, victim, data.src, derive_seed(seed, 5));
      outcome.src = data.src;
      outcome.trgt = data.trgt;
      outcome.pre_label = predict(victim, target.features);
      outcome.acc_pre = accuracy(victim, data.validation);

      OmissionResult attack_result;
      const AttackBudget budget{config.budget_k};
      switch (config.attack.method) {
        case AttackMethod::knn:
          attack_result = knn_attack(data.train, budget, target, data.trgt,
                                     config.attack.metric);
          break;
        case AttackMethod::greedy: {
          const LearnerSpec attacker = config.mode == AttackMode::white_box
                                           ? config.victim
                                           : surrogate_for(config.victim);
          attack_result = greedy_attack(data.train, budget, target, data.src, attacker);
          break;
        }
        case AttackMethod::genetic: {
          const LearnerSpec attacker = config.mode == AttackMode::white_box
                                           ? config.victim
                                           : surrogate_for(config.victim);
          attack_result = genetic_attack(data.train, budget, target, data.trgt,
                                         attacker, config.attack.generations,
                                         config.attack.offspring, derive_seed(seed, 6));
          break;
        }
      }

      const ModelHandle retrained = fit(config.victim, attack_result.retained);
      outcome.post_label = predict(retrained, target.features);
      outcome.acc_post = accuracy(retrained, data.validation);
      outcome.acc_delta = std::abs(outcome.acc_pre - outcome.acc_post);
      outcome.success =
          outcome.pre_label == data.src && outcome.post_label != data.src;
      outcome.removed_ids = attack_result.removed_ids;
      outcome.evaluations = attack_result.evaluations;
      outcome.wall_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - start)
                            .count();
      outcome.failed_setup = false;
      return outcome;
    } catch (const SelectionExhaustedError&) {
      // re-seed and retry
    } catch (const AttackError&) {
      // re-seed and retry
    }
  }
  outcome.failed_setup = true;
  return outcome;
}

inline Dataset load_mnist_pool(const MnistDataSpec& spec) {
  if (spec.csv) return load_csv(spec.images_path, 1.0 / 255.0);
  return load_idx(spec.images_path, spec.labels_path);
}

inline SuccessReport run_experiment(const ExperimentConfig& config,
                                    const Dataset* mnist_pool = nullptr) {
  config.validate();
  Dataset loaded;
  if (std::holds_alternative<MnistDataSpec>(config.dataset) && mnist_pool == nullptr) {
    loaded = load_mnist_pool(std::get<MnistDataSpec>(config.dataset));
    mnist_pool = &loaded;
  }
  SuccessReport report;
  report.config = config;
  report.outcomes.resize(config.repeats);
  parallel_for(config.repeats, config.jobs, [&](std::size_t i) {
    report.outcomes[i] =
        run_instance(config, derive_seed(config.base_seed, i), mnist_pool);
  });
  double delta_sum = 0.0;
  int within_alpha = 0;
  for (const InstanceOutcome& o : report.outcomes) {
    if (o.failed_setup) {
      ++report.failed_setup;
      continue;
    }
    ++report.completed;
    report.successes += o.success;
    delta_sum += o.acc_delta;
    within_alpha += o.acc_delta < config.alpha;
  }
  if (report.completed > 0) {
    report.success_rate = static_cast<double>(report.successes) / report.completed;
    report.mean_abs_delta = delta_sum / report.completed;
    report.fraction_within_alpha =
        static_cast<double>(within_alpha) / report.completed;
  }
  return report;
}

struct SweepCell {
  int src = 0;
  int trgt = 0;
  SuccessReport report;
};

struct SweepResult {
  std::vector<int> classes;
  std::vector<SweepCell> cells;  // ordered pairs, src-major
};

// Ordered (src, trgt) sweep over the given class list. Each cell runs a full
// experiment with that pair fixed.
inline SweepResult run_pair_sweep(const ExperimentConfig& base_config,
                                  const std::vector<int>& classes) {
  if (!std::holds_alternative<MnistDataSpec>(base_config.dataset)) {
    throw ConfigError("pair sweep requires an mnist dataset spec");
  }
  if (classes.size() < 2) throw ConfigError("pair sweep needs >= 2 classes");
  {
    std::vector<int> p = classes;
    std::sort(p.begin(), p.end());
    if (std::adjacent_find(p.begin(), p.end()) != p.end()) {
      throw ConfigError("pair sweep class list contains a duplicate");
    }
  }
  const Dataset pool = load_mnist_pool(std::get<MnistDataSpec>(base_config.dataset));
  SweepResult result;
  result.classes = classes;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    for (std::size_t j = 0; j < classes.size(); ++j) {
      if (i == j) continue;
      ExperimentConfig cell_config = base_config;
      auto& spec = std::get<MnistDataSpec>(cell_config.dataset);
      spec.fixed_pair = {classes[i], classes[j]};
      cell_config.base_seed =
          derive_seed(base_config.base_seed, i * classes.size() + j);
      cell_config.validate();
      SweepCell cell;
      cell.src = classes[i];
      cell.trgt = classes[j];
      cell.report = run_experiment(cell_config, &pool);
      result.cells.push_back(std::move(cell));
    }
  }
  return result;
}

inline void write_csv(const SuccessReport& report, std::ostream& out) {
  out << "seed,src,trgt,pre,post,success,acc_pre,acc_post,delta,removed,"
         "evaluations,wall_ms,failed_setup\n";
  for (const InstanceOutcome& o : report.outcomes) {
    out << o.seed << ',' << o.src << ',' << o.trgt << ',' << o.pre_label << ','
        << o.post_label << ',' << (o.success ? 1 : 0) << ',' << o.acc_pre << ','
        << o.acc_post << ',' << o.acc_delta << ',' << o.removed_ids.size() << ','
        << o.evaluations << ',' << o.wall_ms << ',' << (o.failed_setup ? 1 : 0)
        << '\n';
  }
}

// Success-rate grid with src on rows and trgt on columns; the diagonal is
// left empty.
inline void write_heatmap_csv(const SweepResult& sweep, std::ostream& out) {
  out << "src\\trgt";
  for (int c : sweep.classes) out << ',' << c;
  out << '\n';
  std::size_t cell = 0;
  for (std::size_t i = 0; i < sweep.classes.size(); ++i) {
    out << sweep.classes[i];
    for (std::size_t j = 0; j < sweep.classes.size(); ++j) {
      out << ',';
      if (i == j) continue;
      out << sweep.cells[cell++].report.success_rate;
    }
    out << '\n';
  }
}

}  // namespace omission

#endif  // OMISSION_HARNESS_HPP
