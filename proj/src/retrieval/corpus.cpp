#include "mohpo/retrieval/corpus.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "mohpo/common/errors.hpp"

namespace mohpo::retrieval {

using json = nlohmann::ordered_json;

namespace {

template <typename Fn>
void for_each_line(std::istream &in, Fn &&fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      fn(json::parse(line));
    } catch (const nlohmann::json::exception &e) {
      throw DataError("line " + std::to_string(line_no) + ": " + e.what());
    } catch (const DataError &e) {
      throw DataError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

std::ifstream open(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return in;
}

}  // namespace

std::vector<Document> read_corpus_jsonl(std::istream &in) {
  std::vector<Document> out;
  for_each_line(in, [&](const json &j) {
    Document d;
    d.item_id = j.at("item_id").get<std::string>();
    d.tokens = j.value("tokens", std::vector<std::string>{});
    d.embedding = j.value("embedding", std::vector<double>{});
    if (j.contains("popularity")) {
      for (const auto &[k, v] : j.at("popularity").items()) d.popularity[k] = v.get<double>();
    }
    out.push_back(std::move(d));
  });
  return out;
}

void write_corpus_jsonl(std::ostream &out, const std::vector<Document> &corpus) {
  for (const auto &d : corpus) {
    json j;
    j["item_id"] = d.item_id;
    j["tokens"] = d.tokens;
    j["embedding"] = d.embedding;
    json pop = json::object();
    for (const auto &[k, v] : d.popularity) pop[k] = v;
    j["popularity"] = std::move(pop);
    out << j.dump() << '\n';
  }
}

std::vector<Query> read_queries_jsonl(std::istream &in) {
  std::vector<Query> out;
  for_each_line(in, [&](const json &j) {
    Query q;
    q.query_id = j.at("query_id").get<std::string>();
    q.tokens = j.value("tokens", std::vector<std::string>{});
    q.embedding = j.value("embedding", std::vector<double>{});
    if (j.contains("category_id") && !j.at("category_id").is_null()) {
      q.category_id = j.at("category_id").get<std::string>();
    }
    if (q.tokens.empty() && q.embedding.empty() && !q.category_id) {
      throw DataError("query '" + q.query_id + "' has no tokens, embedding or category_id");
    }
    out.push_back(std::move(q));
  });
  return out;
}

void write_queries_jsonl(std::ostream &out, const std::vector<Query> &queries) {
  for (const auto &q : queries) {
    json j;
    j["query_id"] = q.query_id;
    j["tokens"] = q.tokens;
    j["embedding"] = q.embedding;
    if (q.category_id) j["category_id"] = *q.category_id;
    out << j.dump() << '\n';
  }
}

std::vector<Document> load_corpus(const std::string &path) {
  auto in = open(path);
  try {
    return read_corpus_jsonl(in);
  } catch (const DataError &e) {
    throw DataError(path + ": " + e.what());
  }
}

std::vector<Query> load_queries(const std::string &path) {
  auto in = open(path);
  try {
    return read_queries_jsonl(in);
  } catch (const DataError &e) {
    throw DataError(path + ": " + e.what());
  }
}

}  // namespace mohpo::retrieval
