#pragma once

#include <cstddef>
#include <vector>

#include "mohpo/space/search_space.hpp"
#include "mohpo/study/evaluator.hpp"

namespace mohpo::datagen {

/// The space with every continuous or integer range replaced by `resolution`
/// evenly spaced points (geometric for log scale). List domains are kept.
space::SearchSpace grid_space(const space::SearchSpace &space, std::size_t resolution);

struct OracleEntry {
  space::HPConfig config;  // over the original space
  std::vector<double> objective_values;
  double weighted = 0.0;
};

struct OracleResult {
  std::size_t evaluated = 0;
  std::size_t skipped = 0;  // points the transform rejects
  OracleEntry best;                          // weighted-sum argmax, first on ties
  std::vector<OracleEntry> best_per_objective;
  std::vector<OracleEntry> all;              // grid order, skipped points omitted
};

/// Evaluates every grid configuration through the evaluator. Points the
/// transform rejects as invalid requests are skipped and counted. Throws
/// ConfigError carrying the combination count when it exceeds `cap`.
OracleResult oracle_best(const study::Evaluator &evaluator, std::size_t resolution,
                         const std::vector<double> &weights, std::size_t cap = 100000);

}  // namespace mohpo::datagen
