#include "mohpo/study/pipeline.hpp"

#include <string>

#include "mohpo/common/errors.hpp"
#include "mohpo/sampling/tpe.hpp"

namespace mohpo::study {

std::vector<space::Direction> StudyDefinition::directions() const {
  std::vector<space::Direction> out;
  if (train) {
    for (const auto &spec : train->specs()) out.push_back(spec.direction);
  }
  return out;
}

std::vector<Criterion> StudyDefinition::effective_criteria() const {
  if (!criteria.empty()) return criteria;
  return default_criteria(train->specs());
}

void validate(const StudyDefinition &d) {
  if (!d.sampler) throw ConfigError("sampler: missing");
  if (!d.train) throw ConfigError("data.train_log: no training evaluator");
  if (!d.meta) throw ConfigError("data.meta_log: no meta evaluator");
  if (d.weights.size() != d.train->specs().size()) {
    throw ConfigError("weights: expected " + std::to_string(d.train->specs().size()) +
                      " values, got " + std::to_string(d.weights.size()));
  }
  if (d.meta->specs().size() != d.train->specs().size()) {
    throw ConfigError("objectives: meta and training splits disagree on the objective count");
  }
  if (d.top_n < 1) throw ConfigError("meta.top_n must be >= 1");
  for (const auto &c : d.criteria) {
    if (c.objective && *c.objective >= d.weights.size()) {
      throw ConfigError("meta.criteria: '" + c.name + "' refers to an unknown objective");
    }
  }
  validate(d.cumulative);
  const std::size_t m = d.weights.size();
  if (d.cumulative.seed_quantile.size() != 1 && d.cumulative.seed_quantile.size() != m) {
    throw ConfigError("cumulative.seed_quantile: needs one value or one per objective");
  }
  // Throws on negative or unnormalized weights.
  try {
    std::vector<double> zero(m, 0.0);
    sampling::weighted_sum_reduce(zero, d.weights, d.directions());
  } catch (const std::invalid_argument &e) {
    throw ConfigError(std::string("weights: ") + e.what());
  }
}

void run_stage(const StudyDefinition &definition, space::ObservationDataset &dataset,
               std::size_t budget, int stage, Rng &rng, std::uint64_t &next_id) {
  const auto directions = definition.directions();
  const auto &space = definition.train->space();
  for (std::size_t t = 0; t < budget; ++t) {
    auto config = definition.sampler->next(space, dataset, directions, rng);
    if (!config) break;
    auto eval = definition.train->evaluate(*config);
    space::Trial trial;
    trial.id = next_id++;
    trial.stage = stage;
    trial.config = std::move(*config);
    trial.objective_values = std::move(eval.aggregates);
    trial.provenance = space::Provenance::sampled;
    dataset.append(std::move(trial));
  }
}

namespace {

StageReport run_one(const StudyDefinition &d, const StageReport *previous, int stage,
                    std::size_t budget, Rng &rng, std::uint64_t &next_id) {
  const auto directions = d.directions();
  const auto criteria = d.effective_criteria();
  StageReport report;
  report.stage = stage;
  report.budget = budget;
  if (previous) {
    auto seeded = seed_next_stage(previous->dataset, d.cumulative, d.weights, directions, stage,
                                  next_id);
    SeedingSummary summary;
    summary.gamma = seeded.gamma;
    summary.passed_filter = seeded.passed_filter;
    summary.seeded = seeded.dataset.size();
    summary.elite_added = seeded.elite_added;
    summary.fallback = seeded.fallback;
    report.seeding = std::move(summary);
    report.dataset = std::move(seeded.dataset);
  }
  run_stage(d, report.dataset, budget, stage, rng, next_id);
  if (report.dataset.empty()) throw StudyError("stage produced no trials");

  const auto &best = best_weighted(report.dataset, d.weights, directions);
  report.best_weighted_id = best.id;
  report.best_weighted = sampling::weighted_sum_reduce(best.objective_values, d.weights, directions);
  for (const auto &t : space::pareto_front(report.dataset, directions)) {
    report.pareto_ids.push_back(t.id);
  }

  report.top = extract_top_configs(report.dataset, criteria, d.weights, directions, d.top_n);
  const auto train_ids = d.train->query_ids();
  report.meta_scores = meta_evaluate(report.top.pool, *d.meta, criteria, d.weights, directions,
                                     train_ids, d.allow_identity_split);
  report.vote = vote_select(report.meta_scores, criteria, d.top_n);
  return report;
}

}  // namespace

StudyReport run_cumulative_pipeline(const StudyDefinition &definition,
                                    const StageCallback &on_stage) {
  validate(definition);
  StudyReport study;
  Rng rng(definition.seed);
  std::uint64_t next_id = 0;
  const auto &budgets = definition.cumulative.stages;
  for (std::size_t s = 0; s < budgets.size(); ++s) {
    const int stage = static_cast<int>(s);
    const StageReport *previous = s == 0 ? nullptr : &study.stages.back();
    try {
      study.stages.push_back(run_one(definition, previous, stage, budgets[s], rng, next_id));
    } catch (const ConfigError &e) {
      throw ConfigError("stage " + std::to_string(stage) + ": " + e.what());
    } catch (const std::exception &e) {
      throw StudyError("stage " + std::to_string(stage) + ": " + e.what());
    }
    if (on_stage) on_stage(study.stages.back());
  }
  return study;
}

}  // namespace mohpo::study
