#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mohpo/objectives/interaction_log.hpp"
#include "mohpo/space/direction.hpp"

namespace mohpo::objectives {

enum class MetricKind { ndcg, precision, recall, map };

struct MetricSpec {
  MetricKind kind = MetricKind::ndcg;
  std::size_t k = 10;
  bool operator==(const MetricSpec &) const = default;
};

/// "ndcg@20", "precision@100", "recall@50", "map@10".
std::string to_string(const MetricSpec &metric);
MetricSpec parse_metric(const std::string &text);

/// Additive Beta prior: (events + alpha) / (impressions + alpha + beta).
struct Smoothing {
  double alpha = 1.0;
  double beta = 1.0;
};

struct ObjectiveSpec {
  std::string name;
  Event numerator = Event::clicks;
  std::int64_t min_impressions = 10;
  std::optional<Smoothing> smoothing;
  double positive_threshold = 0.0;
  std::vector<MetricSpec> metrics;
  space::Direction direction = space::Direction::maximize;
};

/// Throws ConfigError naming the offending field.
void validate(const ObjectiveSpec &spec);

/// Smoothed (or raw) event rate; nullopt when raw and impressions == 0.
std::optional<double> event_rate(std::int64_t events, std::int64_t impressions,
                                 const std::optional<Smoothing> &smoothing);

struct Label {
  double graded = 0.0;  // feeds nDCG
  bool positive = false;  // feeds precision / recall / mAP
  bool operator==(const Label &) const = default;
};

using QueryLabels = std::map<std::string, Label>;  // item_id -> label

class LabelSet {
 public:
  void set(const std::string &query_id, const std::string &item_id, Label label) {
    by_query_[query_id][item_id] = label;
  }
  const QueryLabels *find(const std::string &query_id) const {
    auto it = by_query_.find(query_id);
    return it == by_query_.end() ? nullptr : &it->second;
  }
  const std::map<std::string, QueryLabels> &queries() const noexcept { return by_query_; }

 private:
  std::map<std::string, QueryLabels> by_query_;
};

/// Labels of one objective: pairs below min_impressions are dropped, the rate
/// becomes the graded label and rate >= positive_threshold the binary one.
LabelSet derive_labels(const InteractionLog &log, const ObjectiveSpec &spec);

/// One JSON object per (query, item) label.
void write_labels_jsonl(std::ostream &out, const LabelSet &labels);

}  // namespace mohpo::objectives
