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

// Brute-force reference implementations used as independent oracles. They
// deliberately avoid the library's model/attack code paths.

#ifndef OMISSION_TESTS_ORACLES_HPP
#define OMISSION_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <vector>

#include "omission/dataset.hpp"
#include "omission/spac.hpp"

namespace oracles {

// Fraction of the `k` nearest points (Euclidean, ties by position) labeled
// `label`, skipping the ids listed in `removed`.
inline double knn_vote_fraction(const omission::Dataset& d,
                                const std::vector<int>& removed,
                                const std::vector<double>& x, int k, int label) {
  struct Entry {
    double dist2;
    int pos;
  };
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < d.samples.size(); ++i) {
    const omission::Sample& s = d.samples[i];
    if (std::find(removed.begin(), removed.end(), s.id) != removed.end()) continue;
    double dd = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      dd += (s.features[j] - x[j]) * (s.features[j] - x[j]);
    }
    entries.push_back({dd, static_cast<int>(i)});
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.dist2 != b.dist2) return a.dist2 < b.dist2;
    return a.pos < b.pos;
  });
  const int m = std::min<int>(k, static_cast<int>(entries.size()));
  int hits = 0;
  for (int i = 0; i < m; ++i) {
    if (d.samples[entries[i].pos].label == label) ++hits;
  }
  return static_cast<double>(hits) / m;
}

// All subsets of size `k` of the given ids, in lexicographic order.
inline std::vector<std::vector<int>> k_subsets(const std::vector<int>& ids, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> pick(k);
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == k) {
      out.push_back(pick);
      return;
    }
    for (int i = start; i <= static_cast<int>(ids.size()) - (k - depth); ++i) {
      pick[depth] = ids[i];
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
  return out;
}

// Exhaustive empirical risk minimum over unions of at most B closed
// intervals whose endpoints are sample positions (plus the empty union).
inline int brute_force_erm_risk(const std::vector<omission::spac::LabeledPoint>& pts,
                                int max_intervals) {
  std::vector<double> xs;
  for (const auto& p : pts) xs.push_back(p.x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  const int n = static_cast<int>(xs.size());

  std::vector<std::pair<double, double>> candidates;
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) candidates.emplace_back(xs[a], xs[b]);
  }
  int best = 0;
  for (const auto& p : pts) best += p.label == 1;  // empty hypothesis

  std::vector<int> choice;
  std::function<void(int, int)> rec = [&](int start, int remaining) {
    {
      int risk = 0;
      for (const auto& p : pts) {
        bool covered = false;
        for (int c : choice) {
          if (p.x >= candidates[c].first && p.x <= candidates[c].second) {
            covered = true;
            break;
          }
        }
        risk += covered ? (p.label == -1) : (p.label == 1);
      }
      best = std::min(best, risk);
    }
    if (remaining == 0) return;
    for (int c = start; c < static_cast<int>(candidates.size()); ++c) {
      choice.push_back(c);
      rec(c + 1, remaining - 1);
      choice.pop_back();
    }
  };
  rec(0, max_intervals);
  return best;
}

// Exhaustive minimum of the disagreement mass over unions of at most B
// intervals with endpoints on segment boundaries.
inline double brute_force_min_loss(const omission::spac::SpacWorld& world) {
  std::vector<double> bounds;
  for (const auto& s : world.segments) bounds.push_back(s.lo);
  bounds.push_back(1.0);
  const int n = static_cast<int>(bounds.size());

  std::vector<std::pair<double, double>> candidates;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) candidates.emplace_back(bounds[a], bounds[b]);
  }
  auto loss_of = [&](const std::vector<int>& choice) {
    double err = world.total_mass({0.0, 1.0}, +1);
    for (int c : choice) {
      const omission::spac::Interval iv{candidates[c].first, candidates[c].second};
      err -= world.total_mass(iv, +1);
      err += world.total_mass(iv, -1);
    }
    return err;
  };
  double best = loss_of({});
  std::vector<int> choice;
  std::function<void(int, int)> rec = [&](int start, int remaining) {
    best = std::min(best, loss_of(choice));
    if (remaining == 0) return;
    for (int c = start; c < static_cast<int>(candidates.size()); ++c) {
      // keep intervals disjoint and ordered
      if (!choice.empty() &&
          candidates[c].first < candidates[choice.back()].second) {
        continue;
      }
      choice.push_back(c);
      rec(c + 1, remaining - 1);
      choice.pop_back();
    }
  };
  rec(0, world.max_intervals);
  return best;
}

}  // namespace oracles

#endif  // OMISSION_TESTS_ORACLES_HPP
