#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "mohpo/common/rng.hpp"
#include "mohpo/sampling/sampler.hpp"
#include "mohpo/study/evaluator.hpp"
#include "mohpo/study/selection.hpp"

namespace mohpo::study {

struct StudyDefinition {
  std::shared_ptr<const sampling::Sampler> sampler;
  std::vector<double> weights;
  std::shared_ptr<const Evaluator> train;
  std::shared_ptr<const Evaluator> meta;
  CumulativeSettings cumulative;
  std::size_t top_n = 10;
  /// Empty means every objective plus the weighted sum.
  std::vector<Criterion> criteria;
  bool allow_identity_split = false;
  std::uint64_t seed = 0;

  std::vector<space::Direction> directions() const;
  std::vector<Criterion> effective_criteria() const;
};

/// Throws ConfigError for a missing component or inconsistent sizes.
void validate(const StudyDefinition &definition);

struct SeedingSummary {
  std::vector<double> gamma;
  std::size_t passed_filter = 0;
  std::size_t seeded = 0;
  bool elite_added = false;
  bool fallback = false;
};

struct StageReport {
  int stage = 0;
  std::size_t budget = 0;
  space::ObservationDataset dataset;
  std::optional<SeedingSummary> seeding;
  TopSet top;
  std::vector<CandidateScores> meta_scores;
  VoteResult vote;
  std::uint64_t best_weighted_id = 0;
  double best_weighted = 0.0;
  std::vector<std::uint64_t> pareto_ids;

  const CandidateScores &winner() const { return meta_scores.at(vote.winner); }
};

struct StudyReport {
  std::vector<StageReport> stages;
  const CandidateScores &winner() const { return stages.back().winner(); }
};

/// Optimizes one stage: samples until `budget` new trials have been evaluated
/// (or the sampler is exhausted), appending to `dataset`.
void run_stage(const StudyDefinition &definition, space::ObservationDataset &dataset,
               std::size_t budget, int stage, Rng &rng, std::uint64_t &next_id);

using StageCallback = std::function<void(const StageReport &)>;

/// Seed (stage > 0), optimize, extract, meta-evaluate and vote for every stage
/// budget in order. A failure is rethrown with the stage index in its message.
StudyReport run_cumulative_pipeline(const StudyDefinition &definition,
                                    const StageCallback &on_stage = {});

}  // namespace mohpo::study
