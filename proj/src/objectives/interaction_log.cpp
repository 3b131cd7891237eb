#include "mohpo/objectives/interaction_log.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "mohpo/common/errors.hpp"

namespace mohpo::objectives {

namespace {

constexpr const char *kHeader = "query_id,item_id,impressions,clicks,carts,purchases";

std::vector<std::string> split_csv(const std::string &line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::int64_t parse_count(const std::string &field, const char *column) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw DataError(std::string("column ") + column + ": '" + field + "' is not an integer");
  }
  return value;
}

}  // namespace

std::string to_string(Event event) {
  switch (event) {
    case Event::clicks: return "clicks";
    case Event::carts: return "carts";
    case Event::purchases: return "purchases";
  }
  return "?";
}

Event parse_event(const std::string &text) {
  if (text == "clicks") return Event::clicks;
  if (text == "carts") return Event::carts;
  if (text == "purchases") return Event::purchases;
  throw ConfigError("unknown event '" + text + "' (expected clicks, carts or purchases)");
}

std::int64_t count_of(const EventCounts &c, Event event) {
  switch (event) {
    case Event::clicks: return c.clicks;
    case Event::carts: return c.carts;
    case Event::purchases: return c.purchases;
  }
  return 0;
}

void InteractionLog::add(const std::string &query_id, const std::string &item_id,
                         const EventCounts &c) {
  const std::string where = "(" + query_id + ", " + item_id + ")";
  if (c.impressions < 0 || c.clicks < 0 || c.carts < 0 || c.purchases < 0) {
    throw DataError("log row " + where + ": negative count");
  }
  if (c.clicks > c.impressions || c.carts > c.impressions || c.purchases > c.impressions) {
    throw DataError("log row " + where + ": events exceed impressions");
  }
  if (!rows_.emplace(PairKey{query_id, item_id}, c).second) {
    throw DataError("log row " + where + ": duplicate pair");
  }
}

std::vector<std::string> InteractionLog::query_ids() const {
  std::vector<std::string> ids;
  for (const auto &[key, c] : rows_) {
    if (ids.empty() || ids.back() != key.first) ids.push_back(key.first);
  }
  return ids;
}

EventCounts InteractionLog::totals() const {
  EventCounts total;
  for (const auto &[key, c] : rows_) total += c;
  return total;
}

InteractionLog read_log_csv(std::istream &in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("interaction log: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader) {
    throw DataError(std::string("interaction log: header must be '") + kHeader + "'");
  }
  InteractionLog log;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      const auto f = split_csv(line);
      if (f.size() != 6) throw DataError("expected 6 columns, got " + std::to_string(f.size()));
      log.add(f[0], f[1],
              {parse_count(f[2], "impressions"), parse_count(f[3], "clicks"),
               parse_count(f[4], "carts"), parse_count(f[5], "purchases")});
    } catch (const DataError &e) {
      throw DataError("interaction log line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return log;
}

void write_log_csv(std::ostream &out, const InteractionLog &log) {
  out << kHeader << '\n';
  for (const auto &[key, c] : log.rows()) {
    out << key.first << ',' << key.second << ',' << c.impressions << ',' << c.clicks << ','
        << c.carts << ',' << c.purchases << '\n';
  }
}

InteractionLog load_log(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  try {
    return read_log_csv(in);
  } catch (const DataError &e) {
    throw DataError(path + ": " + e.what());
  }
}

}  // namespace mohpo::objectives
