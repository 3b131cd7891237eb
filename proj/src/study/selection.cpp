#include "mohpo/study/selection.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

#include "mohpo/common/errors.hpp"
#include "mohpo/sampling/tpe.hpp"

namespace mohpo::study {

std::vector<Criterion> default_criteria(std::span<const objectives::ObjectiveSpec> specs) {
  std::vector<Criterion> out;
  for (std::size_t m = 0; m < specs.size(); ++m) out.push_back({specs[m].name, m});
  out.push_back(Criterion::weighted_sum());
  return out;
}

double criterion_value(std::span<const double> z, const Criterion &criterion,
                       std::span<const double> weights,
                       std::span<const space::Direction> directions) {
  if (criterion.objective) {
    const std::size_t m = *criterion.objective;
    return space::oriented(z[m], directions[m]);
  }
  return sampling::weighted_sum_reduce(z, weights, directions);
}

const space::Trial &best_weighted(const space::ObservationDataset &dataset,
                                  std::span<const double> weights,
                                  std::span<const space::Direction> directions) {
  if (dataset.empty()) throw std::invalid_argument("best_weighted: empty dataset");
  const space::Trial *best = nullptr;
  double best_value = 0.0;
  for (const auto &t : dataset) {
    const double v = sampling::weighted_sum_reduce(t.objective_values, weights, directions);
    if (!best || v > best_value) {
      best = &t;
      best_value = v;
    }
  }
  return *best;
}

TopSet extract_top_configs(const space::ObservationDataset &dataset,
                           std::span<const Criterion> criteria, std::span<const double> weights,
                           std::span<const space::Direction> directions, std::size_t n) {
  if (n == 0) throw std::invalid_argument("extract_top_configs: n must be >= 1");
  if (dataset.empty()) throw std::invalid_argument("extract_top_configs: empty dataset");
  const auto &trials = dataset.trials();

  TopSet top;
  std::set<std::size_t> chosen;
  for (const auto &criterion : criteria) {
    std::vector<double> values(trials.size());
    for (std::size_t i = 0; i < trials.size(); ++i) {
      values[i] = criterion_value(trials[i].objective_values, criterion, weights, directions);
    }
    std::vector<std::size_t> order(trials.size());
    std::iota(order.begin(), order.end(), 0);
    const std::size_t take = std::min(n, order.size());
    // Trials are stored in id order, so index order breaks ties by id.
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                      [&](std::size_t a, std::size_t b) {
                        return values[a] != values[b] ? values[a] > values[b] : a < b;
                      });
    CriterionTop entry{criterion, {}};
    for (std::size_t r = 0; r < take; ++r) {
      entry.trials.push_back(trials[order[r]]);
      chosen.insert(order[r]);
    }
    top.per_criterion.push_back(std::move(entry));
  }

  // Deduplicate by config, keeping the lowest id.
  std::vector<std::size_t> ordered(chosen.begin(), chosen.end());
  for (std::size_t idx : ordered) {
    const bool duplicate = std::any_of(top.pool.begin(), top.pool.end(), [&](const auto &t) {
      return t.config == trials[idx].config;
    });
    if (!duplicate) top.pool.push_back(trials[idx]);
  }
  return top;
}

std::vector<CandidateScores> meta_evaluate(std::span<const space::Trial> pool,
                                           const Evaluator &meta,
                                           std::span<const Criterion> criteria,
                                           std::span<const double> weights,
                                           std::span<const space::Direction> directions,
                                           std::span<const std::string> train_query_ids,
                                           bool allow_identity_split) {
  if (!allow_identity_split) {
    const std::set<std::string> train(train_query_ids.begin(), train_query_ids.end());
    for (const auto &id : meta.query_ids()) {
      if (train.count(id)) {
        throw ConfigError("meta split shares query '" + id +
                          "' with the training split; splits must be disjoint");
      }
    }
  }
  std::vector<CandidateScores> out;
  out.reserve(pool.size());
  for (const auto &trial : pool) {
    const auto eval = meta.evaluate(trial.config);
    CandidateScores scores;
    scores.trial = trial;
    scores.objective_values = eval.aggregates;
    for (const auto &c : criteria) {
      scores.criteria.push_back(criterion_value(eval.aggregates, c, weights, directions));
    }
    scores.weighted = sampling::weighted_sum_reduce(eval.aggregates, weights, directions);
    scores.metric_means = eval.metric_means;
    out.push_back(std::move(scores));
  }
  return out;
}

VoteResult vote_select(std::span<const CandidateScores> candidates,
                       std::span<const Criterion> criteria, std::size_t n) {
  if (candidates.empty()) throw std::invalid_argument("vote_select: no candidates");
  if (criteria.empty()) throw std::invalid_argument("vote_select: no criteria");
  if (n == 0) throw std::invalid_argument("vote_select: n must be >= 1");

  VoteResult result;
  for (const auto &c : criteria) result.tally.criteria.push_back(c.name);
  result.tally.entries.resize(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (candidates[i].criteria.size() != criteria.size()) {
      throw std::invalid_argument("vote_select: candidate scores do not match criteria");
    }
    result.tally.entries[i].trial_id = candidates[i].trial.id;
    result.tally.entries[i].weighted = candidates[i].weighted;
    result.tally.entries[i].in_top.assign(criteria.size(), false);
  }

  std::vector<std::size_t> order(candidates.size());
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const double x = candidates[a].criteria[k];
      const double y = candidates[b].criteria[k];
      if (x != y) return x > y;
      return candidates[a].trial.id < candidates[b].trial.id;
    });
    for (std::size_t r = 0; r < std::min(n, order.size()); ++r) {
      auto &entry = result.tally.entries[order[r]];
      entry.in_top[k] = true;
      ++entry.votes;
    }
  }

  const auto &e = result.tally.entries;
  std::size_t best = 0;
  for (std::size_t i = 1; i < e.size(); ++i) {
    const bool better = e[i].votes != e[best].votes ? e[i].votes > e[best].votes
                        : e[i].weighted != e[best].weighted ? e[i].weighted > e[best].weighted
                                                            : e[i].trial_id < e[best].trial_id;
    if (better) best = i;
  }
  result.winner = best;
  return result;
}

void validate(const CumulativeSettings &settings) {
  if (settings.seed_quantile.empty()) throw ConfigError("cumulative.seed_quantile is empty");
  for (double q : settings.seed_quantile) {
    if (!(q >= 0.0 && q < 1.0)) {
      throw ConfigError("cumulative.seed_quantile values must lie in [0, 1)");
    }
  }
  if (settings.max_seeds < 1) throw ConfigError("cumulative.max_seeds must be >= 1");
  if (settings.stages.empty()) throw ConfigError("cumulative.stages must list at least one budget");
  for (std::size_t b : settings.stages) {
    if (b < 1) throw ConfigError("cumulative.stages budgets must be >= 1");
  }
}

std::vector<double> seed_thresholds(const space::ObservationDataset &dataset,
                                    std::span<const double> quantiles,
                                    std::span<const space::Direction> directions) {
  const std::size_t m_count = dataset.objective_count();
  std::vector<double> gamma(m_count);
  for (std::size_t m = 0; m < m_count; ++m) {
    std::vector<double> column;
    column.reserve(dataset.size());
    for (const auto &t : dataset) column.push_back(space::oriented(t.objective_values[m], directions[m]));
    std::sort(column.begin(), column.end());
    const double q = quantiles.size() == 1 ? quantiles[0] : quantiles[m];
    gamma[m] = sampling::sorted_quantile(column, q);
  }
  return gamma;
}

std::vector<std::size_t> seed_filter(const space::ObservationDataset &dataset,
                                     std::span<const double> gamma,
                                     std::span<const space::Direction> directions) {
  std::vector<std::size_t> out;
  const auto &trials = dataset.trials();
  for (std::size_t i = 0; i < trials.size(); ++i) {
    bool pass = true;
    for (std::size_t m = 0; m < gamma.size() && pass; ++m) {
      pass = space::oriented(trials[i].objective_values[m], directions[m]) >= gamma[m];
    }
    if (pass) out.push_back(i);
  }
  return out;
}

SeedResult seed_next_stage(const space::ObservationDataset &previous,
                           const CumulativeSettings &settings, std::span<const double> weights,
                           std::span<const space::Direction> directions, int stage,
                           std::uint64_t &next_id) {
  if (previous.empty()) throw std::invalid_argument("seed_next_stage: previous stage is empty");
  if (settings.seed_quantile.size() != 1 &&
      settings.seed_quantile.size() != previous.objective_count()) {
    throw ConfigError("cumulative.seed_quantile needs one value or one per objective");
  }
  SeedResult result;
  result.gamma = seed_thresholds(previous, settings.seed_quantile, directions);
  std::vector<std::size_t> chosen = seed_filter(previous, result.gamma, directions);
  result.passed_filter = chosen.size();
  result.fallback = chosen.empty();

  const auto &trials = previous.trials();
  const space::Trial &elite = best_weighted(previous, weights, directions);
  const auto elite_index = static_cast<std::size_t>(&elite - trials.data());
  if (std::find(chosen.begin(), chosen.end(), elite_index) == chosen.end()) {
    chosen.push_back(elite_index);
    result.elite_added = true;
  }

  std::vector<double> score(trials.size());
  for (std::size_t i : chosen) {
    score[i] = sampling::weighted_sum_reduce(trials[i].objective_values, weights, directions);
  }
  std::sort(chosen.begin(), chosen.end(), [&](std::size_t a, std::size_t b) {
    return score[a] != score[b] ? score[a] > score[b] : a < b;
  });
  if (chosen.size() > settings.max_seeds) chosen.resize(settings.max_seeds);
  std::sort(chosen.begin(), chosen.end());

  for (std::size_t i : chosen) {
    space::Trial seeded = trials[i];
    seeded.id = next_id++;
    seeded.stage = stage;
    seeded.provenance = space::Provenance::seeded;
    result.dataset.append(std::move(seeded));
  }
  return result;
}

}  // namespace mohpo::study
