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

#ifndef OMISSION_SPAC_HPP
#define OMISSION_SPAC_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "omission/errors.hpp"
#include "omission/parallel.hpp"
#include "omission/rng.hpp"

namespace omission::spac {

// One piece of a piecewise-constant world on [0, 1]: constant density and a
// constant ±1 label on [lo, hi).
struct WorldSegment {
  double lo = 0.0;
  double hi = 0.0;
  double density = 0.0;
  int label = 1;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
};

constexpr double kMassTolerance = 1e-9;

// Domain [0, 1] with a piecewise-constant density (the sampling measure) and
// a piecewise-constant ±1 labeling. Hypotheses are unions of at most
// `max_intervals` intervals that predict +1 inside and -1 outside.
struct SpacWorld {
  std::vector<WorldSegment> segments;
  int max_intervals = 1;

  void validate() const {
    if (segments.empty()) throw ValidationError("SpacWorld: no segments");
    if (max_intervals < 1) {
      throw ValidationError("SpacWorld: max_intervals must be >= 1");
    }
    if (segments.front().lo != 0.0 || segments.back().hi != 1.0) {
      throw ValidationError("SpacWorld: segments must cover [0, 1]");
    }
    double mass = 0.0;
    for (std::size_t i = 0; i < segments.size(); ++i) {
      const WorldSegment& s = segments[i];
      if (!(s.hi > s.lo)) throw ValidationError("SpacWorld: empty segment");
      if (s.density < 0.0) throw ValidationError("SpacWorld: negative density");
      if (s.label != 1 && s.label != -1) {
        throw ValidationError("SpacWorld: labels must be +1 or -1");
      }
      if (i > 0 && segments[i - 1].hi != s.lo) {
        throw ValidationError("SpacWorld: segments must be contiguous");
      }
      mass += s.density * (s.hi - s.lo);
    }
    if (std::abs(mass - 1.0) > kMassTolerance) {
      throw ValidationError("SpacWorld: density must integrate to 1, got " +
                            std::to_string(mass));
    }
  }

  int truth(double x) const {
    for (const WorldSegment& s : segments) {
      if (x < s.hi || &s == &segments.back()) return s.label;
    }
    return segments.back().label;
  }

  double total_mass(const Interval& region, int label_filter = 0) const {
    double mass = 0.0;
    for (const WorldSegment& s : segments) {
      if (label_filter != 0 && s.label != label_filter) continue;
      const double lo = std::max(s.lo, region.lo);
      const double hi = std::min(s.hi, region.hi);
      if (hi > lo) mass += s.density * (hi - lo);
    }
    return mass;
  }
};

// Uniform-density world over labeled pieces; breakpoints must start at 0 and
// end at 1, labels[i] labels [breaks[i], breaks[i+1]).
inline SpacWorld make_uniform_world(const std::vector<double>& breaks,
                                    const std::vector<int>& labels,
                                    int max_intervals) {
  if (breaks.size() < 2 || labels.size() + 1 != breaks.size()) {
    throw ValidationError("make_uniform_world: breaks/labels size mismatch");
  }
  SpacWorld w;
  w.max_intervals = max_intervals;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    w.segments.push_back({breaks[i], breaks[i + 1], 1.0, labels[i]});
  }
  w.validate();
  return w;
}

// Exact minimum, over all unions of at most B intervals, of the P-mass where
// the hypothesis disagrees with the truth. Optimal interval endpoints can be
// taken at segment boundaries, so a small DP over segments suffices.
inline double min_loss(const SpacWorld& world) {
  world.validate();
  const int m = static_cast<int>(world.segments.size());
  const int budget = world.max_intervals;
  const double inf = std::numeric_limits<double>::infinity();
  // state: (intervals opened so far, currently inside an interval)
  std::vector<std::vector<double>> dp(budget + 1, std::vector<double>(2, inf));
  dp[0][0] = 0.0;
  for (int i = 0; i < m; ++i) {
    const WorldSegment& s = world.segments[i];
    const double mass = s.density * (s.hi - s.lo);
    const double cost_inside = s.label == -1 ? mass : 0.0;
    const double cost_outside = s.label == 1 ? mass : 0.0;
    std::vector<std::vector<double>> next(budget + 1, std::vector<double>(2, inf));
    for (int j = 0; j <= budget; ++j) {
      for (int inside = 0; inside < 2; ++inside) {
        const double cur = dp[j][inside];
        if (cur == inf) continue;
        // stay outside / leave the interval
        next[j][0] = std::min(next[j][0], cur + cost_outside);
        // stay inside (already open)
        if (inside == 1) next[j][1] = std::min(next[j][1], cur + cost_inside);
        // open a new interval at this segment
        if (inside == 0 && j < budget) {
          next[j + 1][1] = std::min(next[j + 1][1], cur + cost_inside);
        }
      }
    }
    dp.swap(next);
  }
  double best = inf;
  for (int j = 0; j <= budget; ++j) {
    best = std::min(best, std::min(dp[j][0], dp[j][1]));
  }
  return best;
}

// Moves all probability mass on region ∩ {f = -1} proportionally onto
// region ∩ {f = +1}. Density outside the region is untouched.
inline SpacWorld redistribute(const SpacWorld& world, const Interval& region) {
  world.validate();
  if (!(region.hi > region.lo) || region.lo < 0.0 || region.hi > 1.0) {
    throw ValidationError("redistribute: region must be a subinterval of [0, 1]");
  }
  // split segments at the region boundaries
  SpacWorld out;
  out.max_intervals = world.max_intervals;
  for (const WorldSegment& s : world.segments) {
    std::vector<double> cuts{s.lo};
    if (region.lo > s.lo && region.lo < s.hi) cuts.push_back(region.lo);
    if (region.hi > s.lo && region.hi < s.hi) cuts.push_back(region.hi);
    cuts.push_back(s.hi);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      out.segments.push_back({cuts[i], cuts[i + 1], s.density, s.label});
    }
  }
  double pos_mass = 0.0, neg_mass = 0.0;
  for (const WorldSegment& s : out.segments) {
    if (s.lo >= region.lo && s.hi <= region.hi) {
      (s.label == 1 ? pos_mass : neg_mass) += s.density * (s.hi - s.lo);
    }
  }
  if (!(pos_mass > 0.0)) {
    throw PreconditionError(
        "redistribute: region carries no probability mass labeled +1");
  }
  const double scale = (pos_mass + neg_mass) / pos_mass;
  for (WorldSegment& s : out.segments) {
    if (s.lo >= region.lo && s.hi <= region.hi) {
      s.density = s.label == 1 ? s.density * scale : 0.0;
    }
  }
  return out;
}

struct LabeledPoint {
  double x = 0.0;
  int label = 1;
};

// Keeps every point outside the region; inside, only +1 points survive.
inline std::vector<LabeledPoint> empirical_omit(const std::vector<LabeledPoint>& sample,
                                                const Interval& region) {
  std::vector<LabeledPoint> out;
  out.reserve(sample.size());
  for (const LabeledPoint& p : sample) {
    const bool in_region = p.x >= region.lo && p.x <= region.hi;
    if (!in_region || p.label == 1) out.push_back(p);
  }
  return out;
}

// (|S'| - |{z in S' : f(z) = -1}|) / |S| where S' is the in-region part.
inline double estimate_gamma(const std::vector<LabeledPoint>& sample,
                             const Interval& region) {
  if (sample.empty()) throw ValidationError("estimate_gamma: empty sample");
  std::size_t in_region = 0, in_region_neg = 0;
  for (const LabeledPoint& p : sample) {
    if (p.x >= region.lo && p.x <= region.hi) {
      ++in_region;
      if (p.label == -1) ++in_region_neg;
    }
  }
  return static_cast<double>(in_region - in_region_neg) / sample.size();
}

// Hypothesis: union of closed intervals predicting +1, -1 elsewhere.
struct IntervalUnion {
  std::vector<Interval> intervals;

  int predict(double x) const {
    for (const Interval& iv : intervals) {
      if (x >= iv.lo && x <= iv.hi) return 1;
    }
    return -1;
  }
};

// Exact empirical risk minimization over unions of at most B intervals.
// Returned intervals span exactly the covered sample positions; among
// minimizers the lexicographically smallest endpoint list is chosen
// (intervals open and close as early as possible).
inline IntervalUnion erm_learn(const std::vector<LabeledPoint>& sample,
                               int max_intervals) {
  if (sample.empty()) throw ValidationError("erm_learn: empty sample");
  if (max_intervals < 1) throw ValidationError("erm_learn: max_intervals must be >= 1");

  // collapse to distinct positions with per-position label counts
  std::vector<LabeledPoint> sorted = sample;
  std::sort(sorted.begin(), sorted.end(),
            [](const LabeledPoint& a, const LabeledPoint& b) { return a.x < b.x; });
  struct Position {
    double x;
    int pos_count = 0;  // cost of NOT covering
    int neg_count = 0;  // cost of covering
  };
  std::vector<Position> positions;
  for (const LabeledPoint& p : sorted) {
    if (positions.empty() || positions.back().x != p.x) {
      positions.push_back({p.x, 0, 0});
    }
    (p.label == 1 ? positions.back().pos_count : positions.back().neg_count) += 1;
  }
  const int n = static_cast<int>(positions.size());
  const int budget = max_intervals;
  const int inf = std::numeric_limits<int>::max() / 2;

  // suffix[i][j][inside]: minimal risk over positions i..n-1 given j
  // intervals already opened and whether an interval is currently open.
  std::vector<std::vector<std::array<int, 2>>> suffix(
      n + 1, std::vector<std::array<int, 2>>(budget + 1, {inf, inf}));
  for (int j = 0; j <= budget; ++j) suffix[n][j] = {0, 0};
  for (int i = n - 1; i >= 0; --i) {
    for (int j = 0; j <= budget; ++j) {
      // outside: either keep position uncovered, or open a new interval here
      int best_out = positions[i].pos_count + suffix[i + 1][j][0];
      if (j < budget) {
        best_out = std::min(best_out,
                            positions[i].neg_count + suffix[i + 1][j + 1][1]);
      }
      suffix[i][j][0] = best_out;
      // inside: either close before this position, or keep covering
      const int close_now = suffix[i][j][0];
      const int keep = positions[i].neg_count + suffix[i + 1][j][1];
      suffix[i][j][1] = std::min(close_now, keep);
    }
  }

  // risk of leaving everything from position i on uncovered
  std::vector<int> uncovered_tail(n + 1, 0);
  for (int i = n - 1; i >= 0; --i) {
    uncovered_tail[i] = uncovered_tail[i + 1] + positions[i].pos_count;
  }

  // forward reconstruction; prefer opening early and closing early, which
  // yields the lexicographically smallest endpoint list among minimizers
  // (with the empty list preferred when covering nothing more is optimal)
  IntervalUnion result;
  int j = 0;
  bool inside = false;
  double open_x = 0.0;
  for (int i = 0; i < n; ++i) {
    if (!inside) {
      const int open_cost = j < budget
                                ? positions[i].neg_count + suffix[i + 1][j + 1][1]
                                : inf;
      const int stay_cost = positions[i].pos_count + suffix[i + 1][j][0];
      const bool empty_tail_optimal = uncovered_tail[i] == stay_cost;
      if (open_cost <= stay_cost && !(open_cost == stay_cost && empty_tail_optimal)) {
        inside = true;
        ++j;
        open_x = positions[i].x;
        continue;
      }
    } else {
      const int close_cost = suffix[i][j][0];
      const int keep_cost = positions[i].neg_count + suffix[i + 1][j][1];
      if (close_cost <= keep_cost) {
        result.intervals.push_back({open_x, positions[i - 1].x});
        inside = false;
        --i;  // revisit this position from the outside state
        continue;
      }
    }
  }
  if (inside) result.intervals.push_back({open_x, positions[n - 1].x});
  return result;
}

inline int empirical_risk(const IntervalUnion& h, const std::vector<LabeledPoint>& sample) {
  int risk = 0;
  for (const LabeledPoint& p : sample) {
    if (h.predict(p.x) != p.label) ++risk;
  }
  return risk;
}

struct SpacTrialConfig {
  double epsilon = 0.05;
  double delta = 0.1;
  int sample_size = 5000;  // m
  double target_x = 0.35;  // x̂
  double radius = 0.15;    // r
  double gamma = 0.08;
  double gamma_prime = 0.25;
  int trials = 200;
  std::uint64_t seed = 0;
  int jobs = 1;

  void validate() const {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
      throw ValidationError("SpacTrialConfig: epsilon must lie in (0, 1)");
    }
    if (!(delta > 0.0 && delta < 1.0)) {
      throw ValidationError("SpacTrialConfig: delta must lie in (0, 1)");
    }
    if (sample_size < 1) throw ValidationError("SpacTrialConfig: m must be >= 1");
    if (trials < 1) throw ValidationError("SpacTrialConfig: trials must be >= 1");
    if (!(radius > 0.0)) throw ValidationError("SpacTrialConfig: radius must be positive");
    if (target_x - radius < 0.0 || target_x + radius > 1.0) {
      throw ValidationError("SpacTrialConfig: ball around target_x leaves [0, 1]");
    }
  }

  Interval region() const { return {target_x - radius, target_x + radius}; }
};

struct TrialRecord {
  std::uint64_t seed = 0;
  double learned_mass_on_region = 0.0;  // P{g = +1} ∩ region, under P
  double error_mass = 0.0;              // P{g ≠ f}, under P
  bool bound1_satisfied = false;
  bool bound2_satisfied = false;
};

struct BoundReport {
  std::vector<TrialRecord> trials;
  double fraction_bound1 = 0.0;
  double fraction_bound2 = 0.0;
  double bound1_value = 0.0;  // γ - (ε + min_loss)
  double bound2_value = 0.0;  // ε + min_loss + γ'
  double min_loss_value = 0.0;
  double region_pos_mass = 0.0;
  double region_neg_mass = 0.0;
  SpacTrialConfig config;
};

namespace detail {

inline std::vector<LabeledPoint> sample_world(const SpacWorld& world, int m, Rng& rng) {
  std::vector<double> cumulative;
  cumulative.reserve(world.segments.size());
  double acc = 0.0;
  for (const WorldSegment& s : world.segments) {
    acc += s.density * (s.hi - s.lo);
    cumulative.push_back(acc);
  }
  const double total = cumulative.back();
  std::vector<LabeledPoint> out;
  out.reserve(m);
  for (int i = 0; i < m; ++i) {
    const double u = rng.uniform() * total;
    const std::size_t idx =
        std::lower_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin();
    const WorldSegment& s = world.segments[std::min(idx, world.segments.size() - 1)];
    const double prev = idx == 0 ? 0.0 : cumulative[idx - 1];
    const double frac = s.density > 0.0 ? (u - prev) / (s.density * (s.hi - s.lo)) : 0.0;
    out.push_back({s.lo + frac * (s.hi - s.lo), s.label});
  }
  return out;
}

inline double mass_of_hypothesis_on(const SpacWorld& world, const IntervalUnion& h,
                                    const Interval& within) {
  double mass = 0.0;
  for (const Interval& iv : h.intervals) {
    const Interval clipped{std::max(iv.lo, within.lo), std::min(iv.hi, within.hi)};
    if (clipped.hi > clipped.lo) mass += world.total_mass(clipped);
  }
  return mass;
}

inline double disagreement_mass(const SpacWorld& world, const IntervalUnion& h) {
  // error = mass of {f = +1} outside h plus mass of {f = -1} inside h
  double err = world.total_mass({0.0, 1.0}, +1);
  for (const Interval& iv : h.intervals) {
    if (iv.hi >= iv.lo) {
      err -= world.total_mass(iv, +1);
      err += world.total_mass(iv, -1);
    }
  }
  return err;
}

}  // namespace detail

// Monte-Carlo check of both adversarial-redistribution bounds: trains an
// exact ERM learner on samples drawn from the redistributed measure and
// integrates the learned hypothesis against the original one.
inline BoundReport verify_bounds(const SpacTrialConfig& config, const SpacWorld& world) {
  config.validate();
  world.validate();
  const double ml = min_loss(world);
  const double floor = config.epsilon + ml;
  if (!(config.gamma > floor)) {
    throw PreconditionError(
        "gamma precondition failed: need gamma > epsilon + min-loss, got gamma = " +
        std::to_string(config.gamma) + " vs epsilon + min-loss = " +
        std::to_string(floor));
  }
  const Interval region = config.region();
  const double pos_mass = world.total_mass(region, +1);
  if (!(pos_mass > config.gamma)) {
    throw PreconditionError(
        "region precondition failed: need P(region ∩ {f=+1}) > gamma, got " +
        std::to_string(pos_mass) + " vs gamma = " + std::to_string(config.gamma));
  }
  const double neg_mass = world.total_mass(region, -1);
  if (!(neg_mass < config.gamma_prime)) {
    throw PreconditionError(
        "gamma' precondition failed: need P(region ∩ {f=-1}) < gamma', got " +
        std::to_string(neg_mass) + " vs gamma' = " + std::to_string(config.gamma_prime));
  }

  const SpacWorld attacked = redistribute(world, region);

  BoundReport report;
  report.config = config;
  report.min_loss_value = ml;
  report.bound1_value = config.gamma - floor;
  report.bound2_value = floor + config.gamma_prime;
  report.region_pos_mass = pos_mass;
  report.region_neg_mass = neg_mass;
  report.trials.resize(config.trials);

  parallel_for(config.trials, config.jobs, [&](std::size_t t) {
    TrialRecord rec;
    rec.seed = derive_seed(config.seed, t);
    Rng rng(rec.seed);
    const std::vector<LabeledPoint> sample =
        detail::sample_world(attacked, config.sample_size, rng);
    const IntervalUnion learned = erm_learn(sample, world.max_intervals);
    rec.learned_mass_on_region = detail::mass_of_hypothesis_on(world, learned, region);
    rec.error_mass = detail::disagreement_mass(world, learned);
    rec.bound1_satisfied = rec.learned_mass_on_region >= report.bound1_value;
    rec.bound2_satisfied = rec.error_mass <= report.bound2_value;
    report.trials[t] = rec;
  });

  std::size_t ok1 = 0, ok2 = 0;
  for (const TrialRecord& rec : report.trials) {
    ok1 += rec.bound1_satisfied;
    ok2 += rec.bound2_satisfied;
  }
  report.fraction_bound1 = static_cast<double>(ok1) / report.trials.size();
  report.fraction_bound2 = static_cast<double>(ok2) / report.trials.size();
  return report;
}

inline void write_csv(const BoundReport& report, std::ostream& out) {
  out << "trial,seed,learned_mass_on_region,error_mass,bound1_satisfied,bound2_satisfied\n";
  for (std::size_t i = 0; i < report.trials.size(); ++i) {
    const TrialRecord& r = report.trials[i];
    out << i << ',' << r.seed << ',' << r.learned_mass_on_region << ','
        << r.error_mass << ',' << (r.bound1_satisfied ? 1 : 0) << ','
        << (r.bound2_satisfied ? 1 : 0) << '\n';
  }
}

}  // namespace omission::spac

#endif  // OMISSION_SPAC_HPP
