#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mohpo::retrieval {

struct Document {
  std::string item_id;
  std::vector<std::string> tokens;
  std::vector<double> embedding;
  /// Popularity feature name -> non-negative count (views, sells, ...).
  std::map<std::string, double> popularity;
};

struct Query {
  std::string query_id;
  std::vector<std::string> tokens;
  std::vector<double> embedding;
  std::optional<std::string> category_id;
};

/// JSON lines, one object per line with the field names above.
std::vector<Document> read_corpus_jsonl(std::istream &in);
void write_corpus_jsonl(std::ostream &out, const std::vector<Document> &corpus);
std::vector<Query> read_queries_jsonl(std::istream &in);
void write_queries_jsonl(std::ostream &out, const std::vector<Query> &queries);

std::vector<Document> load_corpus(const std::string &path);
std::vector<Query> load_queries(const std::string &path);

}  // namespace mohpo::retrieval
