#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mohpo/objectives/labels.hpp"
#include "mohpo/retrieval/request.hpp"

namespace mohpo::objectives {

struct ObjectiveDiagnostics {
  /// Queries with no labels at all for this objective.
  std::vector<std::string> unlabeled_queries;
  /// Per metric: number of queries excluded by its precondition.
  std::vector<std::size_t> excluded_per_metric;
  std::size_t admitted_queries = 0;
};

struct ObjectiveEvaluation {
  std::vector<std::string> query_ids;  // ascending
  /// [objective][query]: mean of the admitted metrics of that query, or empty
  /// when no metric admitted the query.
  std::vector<std::vector<std::optional<double>>> per_query;
  /// [objective]: z_m, the mean of per_query over admitted queries.
  std::vector<double> aggregates;
  /// [objective][metric]: metric mean over its admitted queries.
  std::vector<std::vector<std::optional<double>>> metric_means;
  std::vector<ObjectiveDiagnostics> diagnostics;
};

/// Evaluates every objective on an aligned batch of ranked lists. Metrics are
/// first averaged within a query, then across queries in ascending query_id
/// order. Throws StudyError naming the objective when no query is admissible,
/// and std::invalid_argument on duplicate query ids or size mismatches.
ObjectiveEvaluation evaluate_objectives(std::span<const retrieval::RankedList> ranked,
                                        std::span<const LabelSet> labels,
                                        std::span<const ObjectiveSpec> specs);

}  // namespace mohpo::objectives
