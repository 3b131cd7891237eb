#pragma once

// Brute-force versions of Pareto filtering, top-n extraction, voting and
// seeding, written from their definitions without reusing library helpers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "mohpo/space/trial.hpp"
#include "mohpo/study/selection.hpp"

namespace oracle {

using mohpo::space::Direction;
using mohpo::space::ObservationDataset;
using mohpo::space::Trial;

inline double up(double z, Direction d) { return d == Direction::maximize ? z : -z; }

inline double weighted(const std::vector<double> &z, const std::vector<double> &w,
                       const std::vector<Direction> &dirs) {
  double s = 0.0;
  for (std::size_t m = 0; m < z.size(); ++m) s += w[m] * up(z[m], dirs[m]);
  return s;
}

inline std::vector<std::uint64_t> pareto_ids(const ObservationDataset &d,
                                             const std::vector<Direction> &dirs) {
  std::vector<std::uint64_t> out;
  for (const auto &a : d) {
    bool dominated = false;
    for (const auto &b : d) {
      bool no_worse = true, better = false;
      for (std::size_t m = 0; m < dirs.size(); ++m) {
        const double x = up(b.objective_values[m], dirs[m]), y = up(a.objective_values[m], dirs[m]);
        no_worse = no_worse && x >= y;
        better = better || x > y;
      }
      dominated = dominated || (no_worse && better);
    }
    if (!dominated) out.push_back(a.id);
  }
  return out;
}

/// Criterion value; objective < 0 means the weighted sum.
inline double criterion(const Trial &t, int objective, const std::vector<double> &w,
                        const std::vector<Direction> &dirs) {
  return objective < 0 ? weighted(t.objective_values, w, dirs)
                       : up(t.objective_values[static_cast<std::size_t>(objective)],
                            dirs[static_cast<std::size_t>(objective)]);
}

struct TopOracle {
  std::vector<std::vector<std::uint64_t>> per_criterion;
  std::vector<std::uint64_t> pool;
};

inline TopOracle top_sets(const ObservationDataset &d, const std::vector<int> &criteria,
                          const std::vector<double> &w, const std::vector<Direction> &dirs,
                          std::size_t n) {
  TopOracle out;
  std::set<std::uint64_t> members;
  for (int c : criteria) {
    std::vector<Trial> sorted(d.begin(), d.end());
    std::stable_sort(sorted.begin(), sorted.end(), [&](const Trial &a, const Trial &b) {
      const double x = criterion(a, c, w, dirs), y = criterion(b, c, w, dirs);
      return x != y ? x > y : a.id < b.id;
    });
    std::vector<std::uint64_t> ids;
    for (std::size_t i = 0; i < sorted.size() && i < n; ++i) {
      ids.push_back(sorted[i].id);
      members.insert(sorted[i].id);
    }
    out.per_criterion.push_back(ids);
  }
  std::vector<mohpo::space::HPConfig> seen;
  for (std::uint64_t id : members) {
    const Trial *t = d.find(id);
    if (std::find(seen.begin(), seen.end(), t->config) != seen.end()) continue;
    seen.push_back(t->config);
    out.pool.push_back(id);
  }
  return out;
}

struct VoteOracle {
  std::vector<std::size_t> votes;
  std::size_t winner = 0;
};

/// A candidate is in the top-n of a criterion iff fewer than n candidates
/// beat it (higher value, or equal value and lower id).
inline VoteOracle vote(const std::vector<mohpo::study::CandidateScores> &c, std::size_t n) {
  VoteOracle out;
  const std::size_t k_count = c.empty() ? 0 : c.front().criteria.size();
  for (std::size_t i = 0; i < c.size(); ++i) {
    std::size_t v = 0;
    for (std::size_t k = 0; k < k_count; ++k) {
      std::size_t beaten_by = 0;
      for (std::size_t j = 0; j < c.size(); ++j) {
        if (c[j].criteria[k] > c[i].criteria[k] ||
            (c[j].criteria[k] == c[i].criteria[k] && c[j].trial.id < c[i].trial.id)) {
          ++beaten_by;
        }
      }
      v += beaten_by < n;
    }
    out.votes.push_back(v);
  }
  for (std::size_t i = 0; i < c.size(); ++i) {
    bool unbeaten = true;
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (i == j) continue;
      const bool j_better =
          out.votes[j] > out.votes[i] ||
          (out.votes[j] == out.votes[i] &&
           (c[j].weighted > c[i].weighted ||
            (c[j].weighted == c[i].weighted && c[j].trial.id < c[i].trial.id)));
      unbeaten = unbeaten && !j_better;
    }
    if (unbeaten) out.winner = i;
  }
  return out;
}

/// Linear interpolation between closest ranks.
inline double quantile(std::vector<double> xs, double q) {
  std::sort(xs.begin(), xs.end());
  const double h = q * static_cast<double>(xs.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= xs.size()) return xs.back();
  return xs[lo] + (h - static_cast<double>(lo)) * (xs[lo + 1] - xs[lo]);
}

struct SeedOracle {
  std::vector<double> gamma;
  std::vector<std::uint64_t> passed;    // ids passing the conjunction
  std::vector<std::uint64_t> selected;  // source ids of the seeds, in id order
};

inline SeedOracle seeds(const ObservationDataset &d, const std::vector<double> &quantiles,
                        std::size_t max_seeds, const std::vector<double> &w,
                        const std::vector<Direction> &dirs) {
  SeedOracle out;
  for (std::size_t m = 0; m < dirs.size(); ++m) {
    std::vector<double> col;
    for (const auto &t : d) col.push_back(up(t.objective_values[m], dirs[m]));
    out.gamma.push_back(quantile(col, quantiles.size() == 1 ? quantiles[0] : quantiles[m]));
  }
  for (const auto &t : d) {
    bool all = true;
    for (std::size_t m = 0; m < dirs.size(); ++m) {
      all = all && up(t.objective_values[m], dirs[m]) >= out.gamma[m];
    }
    if (all) out.passed.push_back(t.id);
  }
  // The weighted-best trial (lowest id on ties) is always carried.
  const Trial *elite = nullptr;
  for (const auto &t : d) {
    if (!elite || weighted(t.objective_values, w, dirs) > weighted(elite->objective_values, w, dirs)) {
      elite = &t;
    }
  }
  std::vector<std::uint64_t> pool = out.passed;
  if (std::find(pool.begin(), pool.end(), elite->id) == pool.end()) pool.push_back(elite->id);
  std::stable_sort(pool.begin(), pool.end(), [&](std::uint64_t a, std::uint64_t b) {
    const double x = weighted(d.find(a)->objective_values, w, dirs);
    const double y = weighted(d.find(b)->objective_values, w, dirs);
    return x != y ? x > y : a < b;
  });
  if (pool.size() > max_seeds) pool.resize(max_seeds);
  std::sort(pool.begin(), pool.end());
  out.selected = pool;
  return out;
}

}  // namespace oracle
