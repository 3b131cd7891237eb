#pragma once

#include <optional>

#include "mohpo/objectives/labels.hpp"
#include "mohpo/retrieval/request.hpp"

namespace mohpo::objectives {

// Ranking metrics over the top-K of a ranked list. `labels` may be null when
// the query has no labels at all. Items without a label count as gain 0 and
// negative.

/// Positives among the top min(K, |ranked|), divided by K.
double precision_at_k(const retrieval::RankedList &ranked, const QueryLabels *labels,
                      std::size_t k);

/// Positives retrieved in the top K over all positives of the query; nullopt
/// when the query has no positives.
std::optional<double> recall_at_k(const retrieval::RankedList &ranked, const QueryLabels *labels,
                                  std::size_t k);

/// Linear-gain DCG with log2(r + 1) discount over the ideal DCG of all labeled
/// items truncated at K; nullopt when no item has graded > 0.
std::optional<double> ndcg_at_k(const retrieval::RankedList &ranked, const QueryLabels *labels,
                                std::size_t k);

/// Mean of precision@r over positive ranks r <= K, normalized by
/// min(K, |positives|); nullopt when the query has no positives.
std::optional<double> map_at_k(const retrieval::RankedList &ranked, const QueryLabels *labels,
                               std::size_t k);

/// Dispatch on the metric kind. Precision is always admitted.
std::optional<double> metric_value(const MetricSpec &metric, const retrieval::RankedList &ranked,
                                   const QueryLabels *labels);

}  // namespace mohpo::objectives
