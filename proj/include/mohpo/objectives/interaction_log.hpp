#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace mohpo::objectives {

struct EventCounts {
  std::int64_t impressions = 0;
  std::int64_t clicks = 0;
  std::int64_t carts = 0;
  std::int64_t purchases = 0;

  EventCounts &operator+=(const EventCounts &o) {
    impressions += o.impressions;
    clicks += o.clicks;
    carts += o.carts;
    purchases += o.purchases;
    return *this;
  }
  bool operator==(const EventCounts &) const = default;
};

enum class Event { clicks, carts, purchases };

std::string to_string(Event event);
Event parse_event(const std::string &text);
std::int64_t count_of(const EventCounts &counts, Event event);

using PairKey = std::pair<std::string, std::string>;  // (query_id, item_id)

/// Per-(query, item) impression and funnel counts.
///
/// clicks, carts and purchases may not exceed impressions; carts <= clicks is
/// deliberately not required.
class InteractionLog {
 public:
  /// Throws DataError on negative counts, events above impressions, or a
  /// repeated (query, item) pair.
  void add(const std::string &query_id, const std::string &item_id, const EventCounts &counts);

  const std::map<PairKey, EventCounts> &rows() const noexcept { return rows_; }
  std::size_t size() const noexcept { return rows_.size(); }
  /// Distinct query ids, ascending.
  std::vector<std::string> query_ids() const;
  EventCounts totals() const;

 private:
  std::map<PairKey, EventCounts> rows_;
};

/// CSV with header query_id,item_id,impressions,clicks,carts,purchases.
InteractionLog read_log_csv(std::istream &in);
void write_log_csv(std::ostream &out, const InteractionLog &log);
InteractionLog load_log(const std::string &path);

}  // namespace mohpo::objectives
