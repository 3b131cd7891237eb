#include "mohpo/datagen/oracle.hpp"

#include <cmath>
#include <string>

#include "mohpo/common/errors.hpp"
#include "mohpo/sampling/sampler.hpp"
#include "mohpo/sampling/tpe.hpp"

namespace mohpo::datagen {

namespace {

std::vector<double> spaced(double lo, double hi, std::size_t n, space::Scale scale) {
  std::vector<double> out;
  if (n == 1) {
    out.push_back(scale == space::Scale::log ? std::sqrt(lo * hi) : 0.5 * (lo + hi));
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n - 1);
    out.push_back(scale == space::Scale::log ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)))
                                             : lo + t * (hi - lo));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

// Maps a grid-space config back onto the declared domains.
space::HPConfig to_original(const space::SearchSpace &original, const space::SearchSpace &grid,
                            const space::HPConfig &config) {
  space::HPConfig out;
  for (std::size_t p = 0; p < original.size(); ++p) {
    const auto &spec = original.params()[p];
    const auto &value = config.at(spec.name);
    if (space::is_list_domain(spec)) {
      out.set(spec.name, value);
      continue;
    }
    const double x = space::numeric_value(grid.params()[p], value);
    if (std::holds_alternative<space::IntegerRange>(spec.domain)) {
      out.set(spec.name, static_cast<std::int64_t>(std::llround(x)));
    } else {
      out.set(spec.name, x);
    }
  }
  return out;
}

}  // namespace

space::SearchSpace grid_space(const space::SearchSpace &space, std::size_t resolution) {
  if (resolution < 1) throw ConfigError("grid resolution must be >= 1");
  std::vector<space::ParamSpec> params;
  for (const auto &spec : space.params()) {
    if (space::is_list_domain(spec)) {
      params.push_back(spec);
      continue;
    }
    space::GridPoints grid;
    if (const auto *c = std::get_if<space::ContinuousRange>(&spec.domain)) {
      for (double x : spaced(c->low, c->high, resolution, c->scale)) grid.points.emplace_back(x);
    } else {
      const auto &r = std::get<space::IntegerRange>(spec.domain);
      for (double x : spaced(static_cast<double>(r.low), static_cast<double>(r.high), resolution,
                             r.scale)) {
        const double v = std::round(x);
        if (grid.points.empty() || std::get<double>(grid.points.back()) != v) grid.points.emplace_back(v);
      }
    }
    params.push_back({spec.name, std::move(grid)});
  }
  return space::SearchSpace(std::move(params));
}

OracleResult oracle_best(const study::Evaluator &evaluator, std::size_t resolution,
                         const std::vector<double> &weights, std::size_t cap) {
  const auto &original = evaluator.space();
  const auto grid = grid_space(original, resolution);
  const std::size_t count = sampling::grid_size(grid);
  if (count > cap) {
    throw ConfigError("oracle grid has " + std::to_string(count) +
                      " configurations, above the cap of " + std::to_string(cap));
  }
  std::vector<space::Direction> directions;
  for (const auto &spec : evaluator.specs()) directions.push_back(spec.direction);

  OracleResult result;
  result.all.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    OracleEntry entry;
    entry.config = to_original(original, grid, sampling::grid_point(grid, i));
    try {
      entry.objective_values = evaluator.evaluate(entry.config).aggregates;
    } catch (const ConfigError &) {
      // The transform rejects this point (e.g. every signal weight is zero).
      ++result.skipped;
      continue;
    }
    entry.weighted = sampling::weighted_sum_reduce(entry.objective_values, weights, directions);
    result.all.push_back(std::move(entry));
  }
  result.evaluated = result.all.size();
  if (result.all.empty()) throw ConfigError("no grid configuration could be evaluated");

  std::size_t best = 0;
  for (std::size_t i = 1; i < result.all.size(); ++i) {
    if (result.all[i].weighted > result.all[best].weighted) best = i;
  }
  result.best = result.all[best];
  for (std::size_t m = 0; m < directions.size(); ++m) {
    std::size_t b = 0;
    for (std::size_t i = 1; i < result.all.size(); ++i) {
      if (space::oriented(result.all[i].objective_values[m], directions[m]) >
          space::oriented(result.all[b].objective_values[m], directions[m])) {
        b = i;
      }
    }
    result.best_per_objective.push_back(result.all[b]);
  }
  return result;
}

}  // namespace mohpo::datagen
