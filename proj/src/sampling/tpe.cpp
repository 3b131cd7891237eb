#include "mohpo/sampling/tpe.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mohpo/space/sampling.hpp"

namespace mohpo::sampling {

double sorted_quantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("quantile of an empty sequence");
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(sorted.size() - 1);
  const auto lower = static_cast<std::size_t>(std::floor(pos));
  const std::size_t upper = std::min(lower + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lower);
  return sorted[lower] + frac * (sorted[upper] - sorted[lower]);
}

QuantileSplit tpe_split(std::span<const double> values, double quantile,
                        space::Direction direction) {
  if (values.empty()) throw std::invalid_argument("tpe_split needs at least one value");
  std::vector<double> canon(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) canon[i] = space::canonical(values[i], direction);
  std::vector<double> sorted = canon;
  std::sort(sorted.begin(), sorted.end());

  QuantileSplit split;
  split.gamma = sorted_quantile(sorted, quantile);
  for (std::size_t i = 0; i < canon.size(); ++i) {
    (canon[i] <= split.gamma ? split.good : split.bad).push_back(i);
  }
  if (split.good.empty()) {
    // Unreachable with exact arithmetic; keep the minimum as the good set.
    const auto best = static_cast<std::size_t>(
        std::min_element(canon.begin(), canon.end()) - canon.begin());
    split.good = {best};
    split.bad.erase(std::remove(split.bad.begin(), split.bad.end(), best), split.bad.end());
  }
  return split;
}

double weighted_sum_reduce(std::span<const double> values, std::span<const double> weights,
                           std::span<const space::Direction> directions) {
  if (values.size() != weights.size() || values.size() != directions.size()) {
    throw std::invalid_argument("weighted_sum_reduce: length mismatch");
  }
  double total_weight = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("weighted_sum_reduce: negative weight");
    total_weight += w;
  }
  if (std::abs(total_weight - 1.0) > 1e-9) {
    throw std::invalid_argument("weighted_sum_reduce: weights must sum to 1");
  }
  double sum = 0.0;
  for (std::size_t m = 0; m < values.size(); ++m) {
    sum += weights[m] * space::oriented(values[m], directions[m]);
  }
  return sum;
}

double log_ei(std::span<const double> log_ratios) {
  return std::accumulate(log_ratios.begin(), log_ratios.end(), 0.0);
}

std::size_t argmax_lowest(std::span<const double> scores) {
  if (scores.empty()) throw std::invalid_argument("argmax of an empty sequence");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

space::HPConfig tpe_next(const space::SearchSpace &space, const space::ObservationDataset &dataset,
                         std::span<const space::Direction> directions, const ObjectiveMode &mode,
                         const TpeSettings &settings, Rng &rng) {
  if (dataset.size() < settings.n_startup) return space::sample_uniform(space, rng);

  const auto &trials = dataset.trials();
  const std::size_t n = trials.size();

  // Objective columns in the orientation handed to tpe_split.
  std::vector<std::vector<double>> columns;
  std::vector<space::Direction> column_dirs;
  if (mode.kind == ObjectiveMode::Kind::separate) {
    const std::size_t m_count = dataset.objective_count();
    if (directions.size() != m_count) {
      throw std::invalid_argument("tpe_next: directions do not match objective count");
    }
    columns.assign(m_count, std::vector<double>(n));
    for (std::size_t t = 0; t < n; ++t) {
      for (std::size_t m = 0; m < m_count; ++m) columns[m][t] = trials[t].objective_values[m];
    }
    column_dirs.assign(directions.begin(), directions.end());
  } else {
    columns.assign(1, std::vector<double>(n));
    for (std::size_t t = 0; t < n; ++t) {
      columns[0][t] = -weighted_sum_reduce(trials[t].objective_values, mode.weights, directions);
    }
    column_dirs.assign(1, space::Direction::minimize);
  }

  std::vector<ConfigDensity> good_models;
  std::vector<ConfigDensity> bad_models;
  for (std::size_t m = 0; m < columns.size(); ++m) {
    const QuantileSplit split = tpe_split(columns[m], settings.gamma_quantile, column_dirs[m]);
    std::vector<const space::HPConfig *> good;
    std::vector<const space::HPConfig *> bad;
    for (std::size_t i : split.good) good.push_back(&trials[i].config);
    for (std::size_t i : split.bad) bad.push_back(&trials[i].config);
    good_models.emplace_back(space, good, settings);
    bad_models.emplace_back(space, bad, settings);
  }

  const std::size_t source = rng.below(columns.size());
  std::vector<space::HPConfig> candidates;
  candidates.reserve(settings.n_candidates);
  for (std::size_t c = 0; c < settings.n_candidates; ++c) {
    candidates.push_back(good_models[source].sample(space, rng));
  }

  std::vector<double> scores(candidates.size());
  std::vector<double> ratios(columns.size());
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    for (std::size_t m = 0; m < columns.size(); ++m) {
      ratios[m] = good_models[m].log_density(space, candidates[c]) -
                  bad_models[m].log_density(space, candidates[c]);
    }
    scores[c] = log_ei(ratios);
  }
  return candidates[argmax_lowest(scores)];
}

TpeSampler::TpeSampler(ObjectiveMode mode, TpeSettings settings)
    : mode_(std::move(mode)), settings_(settings) {
  validate(settings_);
  if (mode_.kind == ObjectiveMode::Kind::weighted_sum && mode_.weights.empty()) {
    throw std::invalid_argument("weighted-sum mode requires objective weights");
  }
}

std::optional<space::HPConfig> TpeSampler::next(const space::SearchSpace &space,
                                                const space::ObservationDataset &dataset,
                                                std::span<const space::Direction> directions,
                                                Rng &rng) const {
  return tpe_next(space, dataset, directions, mode_, settings_, rng);
}

nlohmann::ordered_json TpeSampler::settings() const {
  nlohmann::ordered_json out;
  out["mode"] = mode_.kind == ObjectiveMode::Kind::separate ? "separate" : "weighted-sum";
  if (mode_.kind == ObjectiveMode::Kind::weighted_sum) out["weights"] = mode_.weights;
  out["gamma"] = settings_.gamma_quantile;
  out["n_startup"] = settings_.n_startup;
  out["n_candidates"] = settings_.n_candidates;
  out["bandwidth_floor"] = settings_.bandwidth_floor;
  out["categorical_prior"] = settings_.categorical_prior;
  return out;
}

}  // namespace mohpo::sampling
