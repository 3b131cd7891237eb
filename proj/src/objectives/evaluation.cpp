#include "mohpo/objectives/evaluation.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "mohpo/common/errors.hpp"
#include "mohpo/objectives/metrics.hpp"

namespace mohpo::objectives {

ObjectiveEvaluation evaluate_objectives(std::span<const retrieval::RankedList> ranked,
                                        std::span<const LabelSet> labels,
                                        std::span<const ObjectiveSpec> specs) {
  if (labels.size() != specs.size()) {
    throw std::invalid_argument("evaluate_objectives: one label set per objective is required");
  }
  // Fixed reduction order: ascending query id.
  std::vector<std::size_t> order(ranked.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return ranked[a].query_id < ranked[b].query_id;
  });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (ranked[order[i]].query_id == ranked[order[i - 1]].query_id) {
      throw std::invalid_argument("evaluate_objectives: duplicate query '" +
                                  ranked[order[i]].query_id + "'");
    }
  }

  ObjectiveEvaluation out;
  for (std::size_t i : order) out.query_ids.push_back(ranked[i].query_id);
  const std::size_t q_count = order.size();

  for (std::size_t m = 0; m < specs.size(); ++m) {
    const ObjectiveSpec &spec = specs[m];
    const std::size_t metric_count = spec.metrics.size();
    ObjectiveDiagnostics diag;
    diag.excluded_per_metric.assign(metric_count, 0);
    std::vector<double> metric_sum(metric_count, 0.0);
    std::vector<std::size_t> metric_n(metric_count, 0);
    std::vector<std::optional<double>> per_query(q_count);
    double total = 0.0;

    for (std::size_t qi = 0; qi < q_count; ++qi) {
      const retrieval::RankedList &list = ranked[order[qi]];
      const QueryLabels *q_labels = labels[m].find(list.query_id);
      if (!q_labels) diag.unlabeled_queries.push_back(list.query_id);
      double sum = 0.0;
      std::size_t admitted = 0;
      for (std::size_t k = 0; k < metric_count; ++k) {
        const auto v = metric_value(spec.metrics[k], list, q_labels);
        if (!v) {
          ++diag.excluded_per_metric[k];
          continue;
        }
        sum += *v;
        ++admitted;
        metric_sum[k] += *v;
        ++metric_n[k];
      }
      if (admitted > 0) {
        per_query[qi] = sum / static_cast<double>(admitted);
        total += *per_query[qi];
        ++diag.admitted_queries;
      }
    }
    if (diag.admitted_queries == 0) {
      throw StudyError("objective '" + spec.name + "' has no admissible queries");
    }
    out.aggregates.push_back(total / static_cast<double>(diag.admitted_queries));
    std::vector<std::optional<double>> means(metric_count);
    for (std::size_t k = 0; k < metric_count; ++k) {
      if (metric_n[k] > 0) means[k] = metric_sum[k] / static_cast<double>(metric_n[k]);
    }
    out.metric_means.push_back(std::move(means));
    out.per_query.push_back(std::move(per_query));
    out.diagnostics.push_back(std::move(diag));
  }
  return out;
}

}  // namespace mohpo::objectives
