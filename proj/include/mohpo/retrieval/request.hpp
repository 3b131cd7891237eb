#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace mohpo::retrieval {

/// Reserved signal names; every other weight key names a popularity feature.
inline constexpr std::string_view kLexicalSignal = "lexical";
inline constexpr std::string_view kDenseSignal = "dense";

enum class Normalization { none, min_max };

std::string to_string(Normalization normalization);
Normalization parse_normalization(std::string_view text);

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
  bool operator==(const Bm25Params &) const = default;
};

struct QueryRequest {
  std::string query_id;
  /// Signal name -> weight. Absent signals have weight 0.
  std::map<std::string, double> weights;
  std::size_t candidate_k = 100;
  Normalization normalization = Normalization::none;
  Bm25Params bm25;

  bool operator==(const QueryRequest &) const = default;
};

/// Throws std::invalid_argument unless candidate_k >= 1 and some weight is
/// non-zero and every weight is finite.
void validate(const QueryRequest &request);

struct ScoredItem {
  std::string item_id;
  double score = 0.0;
  bool operator==(const ScoredItem &) const = default;
};

struct RankedList {
  std::string query_id;
  std::vector<ScoredItem> items;  // descending score, ties by ascending item_id
  bool operator==(const RankedList &) const = default;
};

}  // namespace mohpo::retrieval
