#include "mohpo/objectives/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace mohpo::objectives {

namespace {

const Label *label_of(const QueryLabels *labels, const std::string &item) {
  if (!labels) return nullptr;
  auto it = labels->find(item);
  return it == labels->end() ? nullptr : &it->second;
}

bool is_positive(const QueryLabels *labels, const std::string &item) {
  const Label *l = label_of(labels, item);
  return l && l->positive;
}

std::size_t positive_count(const QueryLabels *labels) {
  if (!labels) return 0;
  return static_cast<std::size_t>(std::count_if(
      labels->begin(), labels->end(), [](const auto &kv) { return kv.second.positive; }));
}

std::size_t depth(const retrieval::RankedList &ranked, std::size_t k) {
  return std::min(k, ranked.items.size());
}

}  // namespace

double precision_at_k(const retrieval::RankedList &ranked, const QueryLabels *labels,
                      std::size_t k) {
  std::size_t hits = 0;
  for (std::size_t r = 0; r < depth(ranked, k); ++r) hits += is_positive(labels, ranked.items[r].item_id);
  return static_cast<double>(hits) / static_cast<double>(k);
}

std::optional<double> recall_at_k(const retrieval::RankedList &ranked, const QueryLabels *labels,
                                  std::size_t k) {
  const std::size_t total = positive_count(labels);
  if (total == 0) return std::nullopt;
  std::size_t hits = 0;
  for (std::size_t r = 0; r < depth(ranked, k); ++r) hits += is_positive(labels, ranked.items[r].item_id);
  return static_cast<double>(hits) / static_cast<double>(total);
}

std::optional<double> ndcg_at_k(const retrieval::RankedList &ranked, const QueryLabels *labels,
                                std::size_t k) {
  if (!labels) return std::nullopt;
  std::vector<double> ideal;
  ideal.reserve(labels->size());
  for (const auto &[item, label] : *labels) ideal.push_back(label.graded);
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  if (ideal.empty() || !(ideal.front() > 0.0)) return std::nullopt;

  double idcg = 0.0;
  for (std::size_t r = 0; r < std::min(k, ideal.size()); ++r) {
    idcg += ideal[r] / std::log2(static_cast<double>(r) + 2.0);
  }
  double dcg = 0.0;
  for (std::size_t r = 0; r < depth(ranked, k); ++r) {
    const Label *l = label_of(labels, ranked.items[r].item_id);
    if (l) dcg += l->graded / std::log2(static_cast<double>(r) + 2.0);
  }
  return dcg / idcg;
}

std::optional<double> map_at_k(const retrieval::RankedList &ranked, const QueryLabels *labels,
                               std::size_t k) {
  const std::size_t total = positive_count(labels);
  if (total == 0) return std::nullopt;
  std::size_t hits = 0;
  double sum = 0.0;
  for (std::size_t r = 0; r < depth(ranked, k); ++r) {
    if (is_positive(labels, ranked.items[r].item_id)) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(r + 1);
    }
  }
  return sum / static_cast<double>(std::min(k, total));
}

std::optional<double> metric_value(const MetricSpec &metric, const retrieval::RankedList &ranked,
                                   const QueryLabels *labels) {
  switch (metric.kind) {
    case MetricKind::ndcg: return ndcg_at_k(ranked, labels, metric.k);
    case MetricKind::precision: return precision_at_k(ranked, labels, metric.k);
    case MetricKind::recall: return recall_at_k(ranked, labels, metric.k);
    case MetricKind::map: return map_at_k(ranked, labels, metric.k);
  }
  return std::nullopt;
}

}  // namespace mohpo::objectives
