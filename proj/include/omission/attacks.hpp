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

#ifndef OMISSION_ATTACKS_HPP
#define OMISSION_ATTACKS_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "omission/dataset.hpp"
#include "omission/learners.hpp"
#include "omission/rng.hpp"

namespace omission {

enum class DistanceMetric { euclidean, cosine };

inline const char* to_string(DistanceMetric m) {
  return m == DistanceMetric::euclidean ? "euclidean" : "cosine";
}

inline double distance(const std::vector<double>& a, const std::vector<double>& b,
                       DistanceMetric metric) {
  if (a.size() != b.size()) {
    throw ValidationError("distance: vectors have different lengths");
  }
  if (metric == DistanceMetric::euclidean) {
    return std::sqrt(detail::squared_distance(a, b));
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) {
    throw MetricError("cosine distance is undefined for zero vectors");
  }
  return 1.0 - dot / (std::sqrt(na) * std::sqrt(nb));
}

struct AttackBudget {
  int k = 0;

  void validate() const {
    if (k < 0) throw ValidationError("attack budget must be non-negative");
  }
};

// Result of one attack run. `retained` keeps the surviving samples
// byte-identical to the originals, ids included, so that
// removed_ids ∪ retained reconstructs the input exactly.
struct OmissionResult {
  std::vector<int> removed_ids;  // sorted
  Dataset retained;
  std::string method;
  long long evaluations = 0;       // attacker model trainings performed
  int skipped_candidates = 0;      // candidates dropped due to training failure
  std::vector<double> best_fitness_trace;  // genetic only: best-so-far per generation
};

// Subset of S with the given ids removed. Sample ids are preserved.
inline Dataset subset_excluding(const Dataset& s, const std::vector<int>& removed_ids) {
  const std::set<int> removed(removed_ids.begin(), removed_ids.end());
  Dataset out;
  out.dim = s.dim;
  out.samples.reserve(s.size() - removed.size());
  for (const Sample& sample : s.samples) {
    if (!removed.count(sample.id)) out.samples.push_back(sample);
  }
  out.classes = distinct_sorted_labels(out.samples);
  return out;
}

// Removes the min(k, #non-trgt) samples closest to the target among those
// not labeled trgt. Distance ties go to the lowest sample id. Needs no
// attacker model.
inline OmissionResult knn_attack(const Dataset& s, AttackBudget budget,
                                 const Sample& target, int trgt,
                                 DistanceMetric metric = DistanceMetric::euclidean) {
  budget.validate();
  if (s.empty()) throw ValidationError("knn_attack: dataset is empty");
  if (static_cast<int>(target.features.size()) != s.dim) {
    throw ValidationError("knn_attack: target dimensionality mismatch");
  }
  std::vector<std::pair<double, int>> candidates;
  for (const Sample& sample : s.samples) {
    if (sample.label == trgt) continue;
    candidates.emplace_back(distance(sample.features, target.features, metric),
                            sample.id);
  }
  std::sort(candidates.begin(), candidates.end());
  const std::size_t take = std::min<std::size_t>(budget.k, candidates.size());
  OmissionResult result;
  result.method = "knn";
  result.removed_ids.reserve(take);
  for (std::size_t i = 0; i < take; ++i) result.removed_ids.push_back(candidates[i].second);
  std::sort(result.removed_ids.begin(), result.removed_ids.end());
  result.retained = subset_excluding(s, result.removed_ids);
  return result;
}

// Trains the attacker on S minus the candidate removal set and returns the
// probability it assigns `trgt` at the target point. Zero if the retained
// data contains no trgt samples.
inline double fitness(const LearnerSpec& attacker_spec, const Dataset& s,
                      const std::vector<int>& candidate_removal, int trgt,
                      const Sample& target) {
  const Dataset sub = subset_excluding(s, candidate_removal);
  const ModelHandle m = fit(attacker_spec, sub);
  const int idx = detail::class_index(m.classes(), trgt);
  if (idx < 0) return 0.0;
  return predict_proba(m, target.features)[idx];
}

// Greedy descent: k rounds, each retraining once per remaining sample and
// removing the one that minimizes P(src | target). Ties go to the lowest id.
// Candidates whose retraining fails are skipped.
inline OmissionResult greedy_attack(const Dataset& s, AttackBudget budget,
                                    const Sample& target, int src,
                                    const LearnerSpec& attacker_spec) {
  budget.validate();
  if (s.empty()) throw ValidationError("greedy_attack: dataset is empty");
  OmissionResult result;
  result.method = "greedy";
  std::vector<int> alive;
  alive.reserve(s.size());
  for (const Sample& sample : s.samples) alive.push_back(sample.id);
  std::sort(alive.begin(), alive.end());

  std::vector<int> removal;
  for (int round = 0; round < budget.k && !alive.empty(); ++round) {
    double best_score = std::numeric_limits<double>::infinity();
    int best_id = -1;
    for (int id : alive) {
      removal.push_back(id);
      try {
        const Dataset sub = subset_excluding(s, removal);
        const ModelHandle m = fit(attacker_spec, sub);
        ++result.evaluations;
        const double score = log_score(m, target.features, src);
        if (score < best_score) {
          best_score = score;
          best_id = id;
        }
      } catch (const TrainingError&) {
        ++result.skipped_candidates;
      }
      removal.pop_back();
    }
    if (best_id < 0) {
      throw AttackError("greedy_attack: every candidate removal failed to train");
    }
    removal.push_back(best_id);
    alive.erase(std::find(alive.begin(), alive.end(), best_id));
  }
  result.removed_ids = removal;
  std::sort(result.removed_ids.begin(), result.removed_ids.end());
  result.retained = subset_excluding(s, result.removed_ids);
  return result;
}

namespace detail {

// Core genetic search over fixed-size removal sets. `score` returns the
// quantity to maximize and may throw TrainingError; such candidates are
// skipped. Individuals are kept as sorted id vectors.
struct GeneticCore {
  const std::vector<int>& ids;  // all sample ids, sorted
  int k;
  int generations;
  int offspring_count;
  std::function<double(const std::vector<int>&)> score;

  OmissionResult run(std::uint64_t seed) const {
    Rng rng(seed);
    OmissionResult result;
    result.method = "genetic";

    auto random_subset = [&]() {
      std::vector<int> pick = rng.sample_indices(ids.size(), k);
      std::vector<int> out;
      out.reserve(k);
      for (int p : pick) out.push_back(ids[p]);
      std::sort(out.begin(), out.end());
      return out;
    };
    auto evaluate = [&](const std::vector<int>& ind, double& out) {
      try {
        out = score(ind);
        ++result.evaluations;
        return true;
      } catch (const TrainingError&) {
        ++result.skipped_candidates;
        return false;
      }
    };

    // Initial parents; re-draw a bounded number of times on training failure.
    std::vector<std::vector<int>> parents;
    std::vector<double> parent_scores;
    for (int attempts = 0; parents.size() < 2; ++attempts) {
      if (attempts > 64) {
        throw AttackError("genetic_attack: could not initialize parents");
      }
      std::vector<int> candidate = random_subset();
      double sc;
      if (evaluate(candidate, sc)) {
        parents.push_back(std::move(candidate));
        parent_scores.push_back(sc);
      }
    }

    std::vector<int> best = parents[0];
    double best_score = parent_scores[0];
    if (parent_scores[1] > best_score) {
      best = parents[1];
      best_score = parent_scores[1];
    }

    for (int gen = 0; gen < generations; ++gen) {
      // union of the parents, deduplicated
      std::vector<int> pool = parents[0];
      pool.insert(pool.end(), parents[1].begin(), parents[1].end());
      std::sort(pool.begin(), pool.end());
      pool.erase(std::unique(pool.begin(), pool.end()), pool.end());

      struct Entry {
        double score;
        int age;  // higher = newer; ties in score prefer newer
        std::vector<int> ind;
      };
      std::vector<Entry> population;
      population.push_back({parent_scores[0], 0, parents[0]});
      population.push_back({parent_scores[1], 1, parents[1]});

      for (int t = 0; t < offspring_count; ++t) {
        // recombination: k draws without replacement from the parent union
        std::vector<int> pick = rng.sample_indices(pool.size(), k);
        std::vector<int> child;
        child.reserve(k);
        for (int p : pick) child.push_back(pool[p]);
        // mutation: each member replaced with probability 1/k by a fresh
        // draw from the rest of the dataset
        std::set<int> members(child.begin(), child.end());
        for (int& member : child) {
          if (!rng.bernoulli(1.0 / k)) continue;
          int replacement;
          do {
            replacement = ids[rng.index(ids.size())];
          } while (members.count(replacement));
          members.erase(member);
          members.insert(replacement);
          member = replacement;
        }
        std::sort(child.begin(), child.end());
        double sc;
        if (!evaluate(child, sc)) continue;
        if (sc > best_score) {
          best_score = sc;
          best = child;
        }
        population.push_back({sc, t + 2, std::move(child)});
      }
      // top 2 become the next parents; equal scores prefer the newest
      std::sort(population.begin(), population.end(), [](const Entry& a, const Entry& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.age > b.age;
      });
      parents[0] = population[0].ind;
      parent_scores[0] = population[0].score;
      parents[1] = population[1].ind;
      parent_scores[1] = population[1].score;
      result.best_fitness_trace.push_back(best_score);
    }

    result.removed_ids = best;
    std::sort(result.removed_ids.begin(), result.removed_ids.end());
    return result;
  }
};

}  // namespace detail

// Genetic search with a caller-provided fitness functor (maximized). The
// trace and comparisons use the functor's own scale.
inline OmissionResult genetic_attack_with_fitness(
    const Dataset& s, AttackBudget budget, int generations, int offspring_count,
    std::uint64_t seed, const std::function<double(const std::vector<int>&)>& fitness_fn) {
  budget.validate();
  if (static_cast<int>(s.size()) <= budget.k) {
    throw ValidationError("genetic_attack: dataset must be larger than the budget");
  }
  if (generations < 1) throw ValidationError("genetic_attack: generations must be >= 1");
  if (offspring_count < 2) throw ValidationError("genetic_attack: offspring must be >= 2");
  if (budget.k == 0) {
    OmissionResult result;
    result.method = "genetic";
    result.retained = subset_excluding(s, {});
    return result;
  }
  std::vector<int> ids;
  ids.reserve(s.size());
  for (const Sample& sample : s.samples) ids.push_back(sample.id);
  std::sort(ids.begin(), ids.end());
  detail::GeneticCore core{ids, budget.k, generations, offspring_count, fitness_fn};
  OmissionResult result = core.run(seed);
  result.retained = subset_excluding(s, result.removed_ids);
  return result;
}

// Genetic attack maximizing P(trgt | target) of the attacker model trained
// on the retained data. Candidates are ranked by log probability, which
// orders identically but stays informative when the probability underflows;
// the recorded trace is converted back to probabilities.
inline OmissionResult genetic_attack(const Dataset& s, AttackBudget budget,
                                     const Sample& target, int trgt,
                                     const LearnerSpec& attacker_spec,
                                     int generations, int offspring_count,
                                     std::uint64_t seed) {
  auto log_fitness = [&](const std::vector<int>& removal) {
    const Dataset sub = subset_excluding(s, removal);
    const ModelHandle m = fit(attacker_spec, sub);
    return log_score(m, target.features, trgt);
  };
  OmissionResult result = genetic_attack_with_fitness(
      s, budget, generations, offspring_count, seed, log_fitness);
  for (double& v : result.best_fitness_trace) v = std::exp(v);
  return result;
}

}  // namespace omission

#endif  // OMISSION_ATTACKS_HPP
