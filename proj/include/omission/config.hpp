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

#ifndef OMISSION_CONFIG_HPP
#define OMISSION_CONFIG_HPP

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "omission/harness.hpp"
#include "omission/spac.hpp"

namespace omission {

using Json = nlohmann::json;

enum class RunKind { attack, sweep, spac };

struct RunConfig {
  RunKind kind = RunKind::attack;
  ExperimentConfig experiment;            // attack & sweep
  std::vector<int> sweep_classes;         // sweep
  spac::SpacTrialConfig spac_config;      // spac
  spac::SpacWorld spac_world;             // spac
  Json raw;                               // echoed into reports
};

namespace detail {

template <typename T>
T get_or(const Json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw ConfigError("field '" + key + "' has the wrong type");
  }
}

template <typename T>
T require(const Json& j, const std::string& key) {
  if (!j.contains(key)) throw ConfigError("missing required field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw ConfigError("field '" + key + "' has the wrong type");
  }
}

inline LearnerSpec parse_learner(const Json& j, const std::string& context) {
  const std::string kind = require<std::string>(j, "kind");
  LearnerSpec spec;
  if (kind == "knn") {
    spec = LearnerSpec::Knn(get_or<int>(j, "k", 5));
  } else if (kind == "gnb") {
    spec = LearnerSpec::Gnb();
  } else if (kind == "multinomial_nb") {
    spec = LearnerSpec::MultinomialNb();
  } else if (kind == "svm_linear") {
    spec = LearnerSpec::SvmLinear();
  } else if (kind == "svm_poly") {
    spec = LearnerSpec::SvmPoly(get_or<int>(j, "degree", 3));
  } else if (kind == "dtree_gini") {
    spec = LearnerSpec::DtreeGini();
  } else if (kind == "dtree_entropy") {
    spec = LearnerSpec::DtreeEntropy();
  } else if (kind == "mlp") {
    spec = LearnerSpec::Mlp(get_or<std::vector<int>>(j, "hidden", {16, 16}),
                            get_or<int>(j, "epochs", 200),
                            get_or<double>(j, "learning_rate", 0.01),
                            get_or<std::uint64_t>(j, "seed", 0));
  } else {
    throw ConfigError(context + ": unknown learner kind '" + kind + "'");
  }
  spec.validate();
  return spec;
}

inline DataSpec parse_dataset(const Json& j) {
  const std::string type = require<std::string>(j, "type");
  if (type == "synthetic") {
    SyntheticDataSpec s;
    s.n = get_or<int>(j, "n", s.n);
    if (j.contains("center_src")) {
      const auto v = require<std::vector<double>>(j, "center_src");
      if (v.size() != 2) throw ConfigError("center_src must have 2 entries");
      s.center_src = {v[0], v[1]};
    }
    if (j.contains("center_trgt")) {
      const auto v = require<std::vector<double>>(j, "center_trgt");
      if (v.size() != 2) throw ConfigError("center_trgt must have 2 entries");
      s.center_trgt = {v[0], v[1]};
    }
    s.sigma = get_or<double>(j, "sigma", s.sigma);
    s.target_fraction = get_or<double>(j, "target_fraction", s.target_fraction);
    s.validation_per_class =
        get_or<int>(j, "validation_per_class", s.validation_per_class);
    return s;
  }
  if (type == "mnist") {
    MnistDataSpec m;
    m.images_path = require<std::string>(j, "images");
    m.csv = get_or<bool>(j, "csv", false);
    if (!m.csv) m.labels_path = require<std::string>(j, "labels");
    m.class_pool = get_or<std::vector<int>>(j, "class_pool", m.class_pool);
    m.classes_per_instance =
        get_or<int>(j, "classes_per_instance", m.classes_per_instance);
    if (j.contains("fixed_pair")) {
      const auto v = require<std::vector<int>>(j, "fixed_pair");
      if (v.size() != 2) throw ConfigError("fixed_pair must have 2 entries");
      m.fixed_pair = {{v[0], v[1]}};
    }
    m.per_class = get_or<int>(j, "per_class", m.per_class);
    m.target_pool_per_class =
        get_or<int>(j, "target_pool_per_class", m.target_pool_per_class);
    m.validation_per_class =
        get_or<int>(j, "validation_per_class", m.validation_per_class);
    std::ifstream probe(m.images_path);
    if (!probe) throw ConfigError("dataset file not found: " + m.images_path);
    if (!m.csv) {
      std::ifstream probe_labels(m.labels_path);
      if (!probe_labels) throw ConfigError("dataset file not found: " + m.labels_path);
    }
    return m;
  }
  if (type == "inline") {
    InlineDataSpec in;
    for (const Json& row : require<Json>(j, "samples")) {
      Sample s;
      s.features = row.at("features").get<std::vector<double>>();
      s.label = row.at("label").get<int>();
      in.samples.push_back(std::move(s));
    }
    in.target = require<std::vector<double>>(j, "target");
    in.src = get_or<int>(j, "src", 0);
    in.trgt = get_or<int>(j, "trgt", 1);
    return in;
  }
  throw ConfigError("unknown dataset type '" + type + "'");
}

inline AttackMethodConfig parse_attack(const Json& j) {
  AttackMethodConfig a;
  const std::string method = require<std::string>(j, "method");
  if (method == "knn") {
    a.method = AttackMethod::knn;
  } else if (method == "greedy") {
    a.method = AttackMethod::greedy;
  } else if (method == "genetic") {
    a.method = AttackMethod::genetic;
  } else {
    throw ConfigError("unknown attack method '" + method + "'");
  }
  const std::string metric = get_or<std::string>(j, "metric", "euclidean");
  if (metric == "euclidean") {
    a.metric = DistanceMetric::euclidean;
  } else if (metric == "cosine") {
    a.metric = DistanceMetric::cosine;
  } else {
    throw ConfigError("unknown distance metric '" + metric + "'");
  }
  a.generations = get_or<int>(j, "generations", a.generations);
  a.offspring = get_or<int>(j, "offspring", a.offspring);
  return a;
}

inline spac::SpacWorld parse_world(const Json& j) {
  spac::SpacWorld world;
  world.max_intervals = get_or<int>(j, "max_intervals", 2);
  if (j.contains("segments")) {
    for (const Json& row : j.at("segments")) {
      spac::WorldSegment seg;
      seg.lo = row.at("lo").get<double>();
      seg.hi = row.at("hi").get<double>();
      seg.density = row.at("density").get<double>();
      seg.label = row.at("label").get<int>();
      world.segments.push_back(seg);
    }
  } else {
    const auto breaks = require<std::vector<double>>(j, "breaks");
    const auto labels = require<std::vector<int>>(j, "labels");
    return spac::make_uniform_world(breaks, labels, world.max_intervals);
  }
  world.validate();
  return world;
}

}  // namespace detail

inline RunConfig parse_run_config(const Json& j) {
  RunConfig run;
  run.raw = j;
  const std::string kind = detail::require<std::string>(j, "kind");
  if (kind == "attack" || kind == "sweep") {
    run.kind = kind == "attack" ? RunKind::attack : RunKind::sweep;
    ExperimentConfig& e = run.experiment;
    e.dataset = detail::parse_dataset(detail::require<Json>(j, "dataset"));
    e.victim = detail::parse_learner(detail::require<Json>(j, "victim"), "victim");
    e.attack = detail::parse_attack(detail::require<Json>(j, "attack"));
    const std::string mode = detail::get_or<std::string>(j, "mode", "white_box");
    if (mode == "white_box") {
      e.mode = AttackMode::white_box;
    } else if (mode == "black_box") {
      e.mode = AttackMode::black_box;
    } else {
      throw ConfigError("unknown mode '" + mode + "'");
    }
    e.budget_k = detail::get_or<int>(j, "budget", e.budget_k);
    e.repeats = detail::get_or<int>(j, "repeats", e.repeats);
    e.alpha = detail::get_or<double>(j, "alpha", e.alpha);
    e.base_seed = detail::get_or<std::uint64_t>(j, "seed", e.base_seed);
    if (run.kind == RunKind::sweep) {
      if (!std::holds_alternative<MnistDataSpec>(e.dataset)) {
        throw ConfigError("sweep requires a dataset of type 'mnist'");
      }
      run.sweep_classes = detail::get_or<std::vector<int>>(
          j, "classes", std::get<MnistDataSpec>(e.dataset).class_pool);
    }
    e.validate();
    return run;
  }
  if (kind == "spac") {
    run.kind = RunKind::spac;
    run.spac_world = detail::parse_world(detail::require<Json>(j, "world"));
    spac::SpacTrialConfig& c = run.spac_config;
    c.epsilon = detail::get_or<double>(j, "epsilon", c.epsilon);
    c.delta = detail::get_or<double>(j, "delta", c.delta);
    c.sample_size = detail::get_or<int>(j, "m", c.sample_size);
    c.target_x = detail::get_or<double>(j, "target_x", c.target_x);
    c.radius = detail::get_or<double>(j, "radius", c.radius);
    c.gamma = detail::get_or<double>(j, "gamma", c.gamma);
    c.gamma_prime = detail::get_or<double>(j, "gamma_prime", c.gamma_prime);
    c.trials = detail::get_or<int>(j, "trials", c.trials);
    c.seed = detail::get_or<std::uint64_t>(j, "seed", c.seed);
    c.validate();
    return run;
  }
  throw ConfigError("unknown run kind '" + kind + "'");
}

inline RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw ConfigError("config parse error: " + std::string(e.what()));
  }
  return parse_run_config(j);
}

// --- report serialization -------------------------------------------------

inline Json report_json(const SuccessReport& report, const Json& config_echo,
                        std::uint64_t effective_seed) {
  Json j;
  j["kind"] = "attack";
  j["config"] = config_echo;
  j["effective_seed"] = effective_seed;
  j["repeats"] = report.outcomes.size();
  j["completed"] = report.completed;
  j["failed_setup"] = report.failed_setup;
  j["successes"] = report.successes;
  j["success_rate"] = report.success_rate;
  j["mean_abs_acc_delta"] = report.mean_abs_delta;
  j["fraction_within_alpha"] = report.fraction_within_alpha;
  return j;
}

inline Json sweep_json(const SweepResult& sweep, const Json& config_echo,
                       std::uint64_t effective_seed) {
  Json j;
  j["kind"] = "sweep";
  j["config"] = config_echo;
  j["effective_seed"] = effective_seed;
  j["classes"] = sweep.classes;
  Json cells = Json::array();
  for (const SweepCell& cell : sweep.cells) {
    Json c;
    c["src"] = cell.src;
    c["trgt"] = cell.trgt;
    c["success_rate"] = cell.report.success_rate;
    c["completed"] = cell.report.completed;
    c["failed_setup"] = cell.report.failed_setup;
    c["mean_abs_acc_delta"] = cell.report.mean_abs_delta;
    cells.push_back(std::move(c));
  }
  j["cells"] = std::move(cells);
  return j;
}

inline Json spac_json(const spac::BoundReport& report, const Json& config_echo,
                      std::uint64_t effective_seed) {
  Json j;
  j["kind"] = "spac";
  j["config"] = config_echo;
  j["effective_seed"] = effective_seed;
  j["trials"] = report.trials.size();
  j["min_loss"] = report.min_loss_value;
  j["bound1_value"] = report.bound1_value;
  j["bound2_value"] = report.bound2_value;
  j["region_pos_mass"] = report.region_pos_mass;
  j["region_neg_mass"] = report.region_neg_mass;
  j["fraction_bound1_satisfied"] = report.fraction_bound1;
  j["fraction_bound2_satisfied"] = report.fraction_bound2;
  return j;
}

}  // namespace omission

#endif  // OMISSION_CONFIG_HPP
