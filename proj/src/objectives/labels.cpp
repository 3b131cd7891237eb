#include "mohpo/objectives/labels.hpp"

#include <cmath>
#include <ostream>

#include <nlohmann/json.hpp>

#include "mohpo/common/errors.hpp"

namespace mohpo::objectives {

std::string to_string(const MetricSpec &metric) {
  const char *name = "ndcg";
  switch (metric.kind) {
    case MetricKind::ndcg: name = "ndcg"; break;
    case MetricKind::precision: name = "precision"; break;
    case MetricKind::recall: name = "recall"; break;
    case MetricKind::map: name = "map"; break;
  }
  return std::string(name) + "@" + std::to_string(metric.k);
}

MetricSpec parse_metric(const std::string &text) {
  const auto at = text.find('@');
  if (at == std::string::npos) throw ConfigError("metric '" + text + "' must look like ndcg@20");
  const std::string kind = text.substr(0, at);
  MetricSpec m;
  if (kind == "ndcg") {
    m.kind = MetricKind::ndcg;
  } else if (kind == "precision" || kind == "prec") {
    m.kind = MetricKind::precision;
  } else if (kind == "recall") {
    m.kind = MetricKind::recall;
  } else if (kind == "map") {
    m.kind = MetricKind::map;
  } else {
    throw ConfigError("unknown metric kind '" + kind + "'");
  }
  try {
    std::size_t used = 0;
    const long k = std::stol(text.substr(at + 1), &used);
    if (used != text.size() - at - 1 || k < 1) throw std::invalid_argument("k");
    m.k = static_cast<std::size_t>(k);
  } catch (const std::exception &) {
    throw ConfigError("metric '" + text + "': K must be an integer >= 1");
  }
  return m;
}

void validate(const ObjectiveSpec &spec) {
  const std::string prefix = "objective '" + spec.name + "': ";
  if (spec.name.empty()) throw ConfigError("objective name must be non-empty");
  if (spec.min_impressions < 0) throw ConfigError(prefix + "min_impressions must be >= 0");
  if (spec.smoothing && !(spec.smoothing->alpha > 0.0 && spec.smoothing->beta > 0.0)) {
    throw ConfigError(prefix + "smoothing alpha and beta must be positive");
  }
  if (!(spec.positive_threshold >= 0.0 && spec.positive_threshold <= 1.0)) {
    throw ConfigError(prefix + "positive_threshold must lie in [0, 1]");
  }
  if (spec.metrics.empty()) throw ConfigError(prefix + "at least one metric is required");
  for (const auto &m : spec.metrics) {
    if (m.k < 1) throw ConfigError(prefix + "metric K must be >= 1");
  }
}

std::optional<double> event_rate(std::int64_t events, std::int64_t impressions,
                                 const std::optional<Smoothing> &smoothing) {
  const double x = static_cast<double>(events);
  const double n = static_cast<double>(impressions);
  if (smoothing) return (x + smoothing->alpha) / (n + smoothing->alpha + smoothing->beta);
  if (impressions == 0) return std::nullopt;
  return x / n;
}

LabelSet derive_labels(const InteractionLog &log, const ObjectiveSpec &spec) {
  LabelSet labels;
  for (const auto &[key, counts] : log.rows()) {
    if (counts.impressions < spec.min_impressions) continue;
    const auto rate = event_rate(count_of(counts, spec.numerator), counts.impressions,
                                 spec.smoothing);
    if (!rate) continue;
    labels.set(key.first, key.second, {*rate, *rate >= spec.positive_threshold});
  }
  return labels;
}

void write_labels_jsonl(std::ostream &out, const LabelSet &labels) {
  for (const auto &[query, items] : labels.queries()) {
    for (const auto &[item, label] : items) {
      nlohmann::ordered_json j;
      j["query_id"] = query;
      j["item_id"] = item;
      j["graded"] = label.graded;
      j["positive"] = label.positive;
      out << j.dump() << '\n';
    }
  }
}

}  // namespace mohpo::objectives
