#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mohpo/space/direction.hpp"
#include "mohpo/space/trial.hpp"
#include "mohpo/study/evaluator.hpp"

namespace mohpo::study {

/// A ranking criterion: one training objective, or the weighted sum.
struct Criterion {
  std::string name;
  std::optional<std::size_t> objective;  // empty = weighted sum

  static Criterion weighted_sum() { return {"weighted_sum", std::nullopt}; }
};

/// Every objective followed by the weighted sum.
std::vector<Criterion> default_criteria(std::span<const objectives::ObjectiveSpec> specs);

/// Criterion value in "larger is better" orientation.
double criterion_value(std::span<const double> objective_values, const Criterion &criterion,
                       std::span<const double> weights,
                       std::span<const space::Direction> directions);

/// Trial with the highest weighted score (lowest id on ties).
const space::Trial &best_weighted(const space::ObservationDataset &dataset,
                                  std::span<const double> weights,
                                  std::span<const space::Direction> directions);

struct CriterionTop {
  Criterion criterion;
  std::vector<space::Trial> trials;  // best first, ties by ascending id
};

struct TopSet {
  std::vector<CriterionTop> per_criterion;
  /// Union of all top lists, deduplicated by config (the lowest trial id of a
  /// config is kept), in ascending trial id order.
  std::vector<space::Trial> pool;
};

/// Top-n trials per criterion. Throws std::invalid_argument for n == 0 or an
/// empty dataset.
TopSet extract_top_configs(const space::ObservationDataset &dataset,
                           std::span<const Criterion> criteria, std::span<const double> weights,
                           std::span<const space::Direction> directions, std::size_t n);

struct CandidateScores {
  space::Trial trial;                 // the training trial
  std::vector<double> objective_values;  // z_m on the meta split
  std::vector<double> criteria;       // per criterion, larger is better
  double weighted = 0.0;              // weighted meta score
  std::vector<std::vector<std::optional<double>>> metric_means;
};

/// Re-runs every pool candidate through `meta`. Throws ConfigError when the
/// meta split shares a query id with the training split, unless
/// `allow_identity_split` is set (test-only path).
std::vector<CandidateScores> meta_evaluate(std::span<const space::Trial> pool,
                                           const Evaluator &meta,
                                           std::span<const Criterion> criteria,
                                           std::span<const double> weights,
                                           std::span<const space::Direction> directions,
                                           std::span<const std::string> train_query_ids,
                                           bool allow_identity_split = false);

struct TallyEntry {
  std::uint64_t trial_id = 0;
  std::size_t votes = 0;
  std::vector<bool> in_top;  // per criterion
  double weighted = 0.0;     // tie-break key
};

struct VoteTally {
  std::vector<std::string> criteria;
  std::vector<TallyEntry> entries;  // aligned with the candidates
};

struct VoteResult {
  std::size_t winner = 0;  // index into the candidates
  VoteTally tally;
};

/// Vote(h) = number of criteria for which h is in the meta top-n. The winner
/// maximizes votes, then the weighted meta score, then has the lowest id.
VoteResult vote_select(std::span<const CandidateScores> candidates,
                       std::span<const Criterion> criteria, std::size_t n);

struct CumulativeSettings {
  /// Per objective; a single value applies to every objective.
  std::vector<double> seed_quantile{0.8};
  std::size_t max_seeds = 20;
  std::vector<std::size_t> stages{100};
};

void validate(const CumulativeSettings &settings);

/// gamma_m: the seed quantile of each objective over the dataset, oriented so
/// that larger is better.
std::vector<double> seed_thresholds(const space::ObservationDataset &dataset,
                                    std::span<const double> quantiles,
                                    std::span<const space::Direction> directions);

/// Indices of trials with oriented z_m >= gamma_m for every objective.
std::vector<std::size_t> seed_filter(const space::ObservationDataset &dataset,
                                     std::span<const double> gamma,
                                     std::span<const space::Direction> directions);

struct SeedResult {
  space::ObservationDataset dataset;
  std::vector<double> gamma;
  std::size_t passed_filter = 0;
  bool elite_added = false;  // weighted-best trial carried despite the filter
  bool fallback = false;     // filter was empty
};

/// Warm-start dataset for the next stage: trials passing seed_filter plus the
/// weighted-best trial, truncated to max_seeds by weighted score, re-numbered
/// from next_id (in their original order) and marked seeded.
SeedResult seed_next_stage(const space::ObservationDataset &previous,
                           const CumulativeSettings &settings, std::span<const double> weights,
                           std::span<const space::Direction> directions, int stage,
                           std::uint64_t &next_id);

}  // namespace mohpo::study
