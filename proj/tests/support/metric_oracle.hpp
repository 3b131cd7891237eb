#pragma once

// Brute-force ranking metrics written from the definitions, independent of
// the library code. Items are small integers; graded[i] and positive[i]
// describe item i, and ranked lists hold item numbers.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mohpo/objectives/metrics.hpp"

namespace oracle {

struct Instance {
  std::vector<int> ranked;
  std::vector<double> graded;
  std::vector<bool> positive;
};

inline double precision(const Instance &x, std::size_t k) {
  double hits = 0;
  for (std::size_t r = 0; r < x.ranked.size() && r < k; ++r) hits += x.positive[x.ranked[r]];
  return hits / static_cast<double>(k);
}

inline std::optional<double> recall(const Instance &x, std::size_t k) {
  const auto total = std::count(x.positive.begin(), x.positive.end(), true);
  if (total == 0) return std::nullopt;
  double hits = 0;
  for (std::size_t r = 0; r < x.ranked.size() && r < k; ++r) hits += x.positive[x.ranked[r]];
  return hits / static_cast<double>(total);
}

inline std::optional<double> ndcg(const Instance &x, std::size_t k) {
  auto gains = x.graded;
  if (std::none_of(gains.begin(), gains.end(), [](double g) { return g > 0; })) return std::nullopt;
  double dcg = 0;
  for (std::size_t r = 0; r < x.ranked.size() && r < k; ++r) {
    dcg += x.graded[x.ranked[r]] / std::log2(static_cast<double>(r) + 2.0);
  }
  std::sort(gains.begin(), gains.end(), std::greater<>());
  double idcg = 0;
  for (std::size_t r = 0; r < gains.size() && r < k; ++r) {
    idcg += gains[r] / std::log2(static_cast<double>(r) + 2.0);
  }
  return dcg / idcg;
}

inline std::optional<double> average_precision(const Instance &x, std::size_t k) {
  const auto total = static_cast<std::size_t>(std::count(x.positive.begin(), x.positive.end(), true));
  if (total == 0) return std::nullopt;
  double sum = 0, hits = 0;
  for (std::size_t r = 0; r < x.ranked.size() && r < k; ++r) {
    if (x.positive[x.ranked[r]]) {
      hits += 1;
      sum += hits / static_cast<double>(r + 1);
    }
  }
  return sum / static_cast<double>(std::min(k, total));
}

inline std::string item_name(int i) { return "it" + std::to_string(i); }

inline mohpo::retrieval::RankedList to_ranked(const Instance &x) {
  mohpo::retrieval::RankedList out;
  out.query_id = "q";
  double score = static_cast<double>(x.ranked.size());
  for (int i : x.ranked) out.items.push_back({item_name(i), score--});
  return out;
}

inline mohpo::objectives::QueryLabels to_labels(const Instance &x) {
  mohpo::objectives::QueryLabels out;
  for (std::size_t i = 0; i < x.graded.size(); ++i) {
    out[item_name(static_cast<int>(i))] = {x.graded[i], static_cast<bool>(x.positive[i])};
  }
  return out;
}

inline bool close(const std::optional<double> &a, const std::optional<double> &b, double tol) {
  if (a.has_value() != b.has_value()) return false;
  return !a || std::abs(*a - *b) <= tol;
}

struct SweepResult {
  std::size_t checked = 0;
  std::size_t mismatches = 0;
  std::string first_mismatch;
};

/// Every ranked list over up to `n_items` items (all ordered subsets), every
/// positive set of size <= max_pos and every K in 1..n_items+1.
inline SweepResult exhaustive_metric_sweep(int n_items = 6, int max_pos = 4, double tol = 1e-12) {
  using namespace mohpo::objectives;
  SweepResult res;
  std::vector<std::vector<int>> lists{{}};
  for (std::size_t len = 1; len <= static_cast<std::size_t>(n_items); ++len) {
    std::vector<std::vector<int>> next;
    for (const auto &l : lists) {
      if (l.size() != len - 1) continue;
      for (int i = 0; i < n_items; ++i) {
        if (std::find(l.begin(), l.end(), i) != l.end()) continue;
        auto e = l;
        e.push_back(i);
        next.push_back(std::move(e));
      }
    }
    lists.insert(lists.end(), next.begin(), next.end());
  }
  for (unsigned mask = 0; mask < (1u << n_items); ++mask) {
    if (__builtin_popcount(mask) > max_pos) continue;
    Instance base;
    for (int i = 0; i < n_items; ++i) {
      const bool pos = (mask >> i) & 1u;
      base.positive.push_back(pos);
      // Graded labels are not tied to the binary ones, as with real thresholds.
      base.graded.push_back(pos ? 0.5 + 0.1 * i : (i % 3 == 0 ? 0.2 : 0.0));
    }
    const auto labels = to_labels(base);
    for (const auto &l : lists) {
      Instance x = base;
      x.ranked = l;
      const auto ranked = to_ranked(x);
      for (std::size_t k = 1; k <= static_cast<std::size_t>(n_items) + 1; ++k) {
        const bool ok =
            close(precision_at_k(ranked, &labels, k), precision(x, k), tol) &&
            close(recall_at_k(ranked, &labels, k), recall(x, k), tol) &&
            close(ndcg_at_k(ranked, &labels, k), ndcg(x, k), tol) &&
            close(map_at_k(ranked, &labels, k), average_precision(x, k), tol);
        ++res.checked;
        if (!ok) {
          if (res.mismatches == 0) {
            res.first_mismatch = "mask " + std::to_string(mask) + " k " + std::to_string(k) +
                                 " list size " + std::to_string(l.size());
          }
          ++res.mismatches;
        }
      }
    }
  }
  return res;
}

}  // namespace oracle
