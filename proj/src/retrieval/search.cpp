#include "mohpo/retrieval/search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mohpo/common/errors.hpp"
#include "mohpo/common/parallel.hpp"

namespace mohpo::retrieval {

std::string to_string(Normalization normalization) {
  return normalization == Normalization::none ? "none" : "minmax";
}

Normalization parse_normalization(std::string_view text) {
  if (text == "none") return Normalization::none;
  if (text == "minmax" || text == "min-max" || text == "min_max") return Normalization::min_max;
  throw ConfigError("unknown normalization '" + std::string(text) + "'");
}

void validate(const QueryRequest &request) {
  if (request.candidate_k < 1) throw std::invalid_argument("candidate_k must be >= 1");
  bool any = false;
  for (const auto &[name, w] : request.weights) {
    if (!std::isfinite(w)) throw std::invalid_argument("weight '" + name + "' is not finite");
    any = any || w != 0.0;
  }
  if (!any) throw std::invalid_argument("request needs at least one non-zero weight");
}

namespace {

double idf(const Index &index, std::size_t df) {
  const double n = static_cast<double>(index.size());
  const double d = static_cast<double>(df);
  return std::log(1.0 + (n - d + 0.5) / (d + 0.5));
}

double tf_part(const Index &index, std::size_t doc, std::uint32_t tf, const Bm25Params &p) {
  const double f = static_cast<double>(tf);
  const double norm = 1.0 - p.b + p.b * static_cast<double>(index.length(doc)) / index.average_length();
  return f * (p.k1 + 1.0) / (f + p.k1 * norm);
}

void min_max(std::vector<double> &values) {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double low = *lo;
  const double span = *hi - low;
  for (double &v : values) v = span > 0.0 ? (v - low) / span : 0.0;
}

}  // namespace

double bm25_score(const Index &index, std::span<const std::string> query_tokens, std::size_t doc,
                  const Bm25Params &params) {
  double score = 0.0;
  for (const auto &term : query_tokens) {
    const auto *postings = index.postings(term);
    if (!postings) continue;
    auto it = std::lower_bound(postings->begin(), postings->end(), doc,
                               [](const Posting &p, std::size_t d) { return p.doc < d; });
    if (it == postings->end() || it->doc != doc) continue;
    score += idf(index, postings->size()) * tf_part(index, doc, it->tf, params);
  }
  return score;
}

double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("cosine: dimension mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::vector<double> lexical_signal(const Index &index, const Query &query,
                                   const Bm25Params &params) {
  // Accumulates term by term in query order, the same summation order as
  // bm25_score, so both routes agree bit for bit.
  std::vector<double> scores(index.size(), 0.0);
  for (const auto &term : query.tokens) {
    const auto *postings = index.postings(term);
    if (!postings) continue;
    const double w = idf(index, postings->size());
    for (const Posting &p : *postings) scores[p.doc] += w * tf_part(index, p.doc, p.tf, params);
  }
  return scores;
}

std::vector<double> dense_signal(const Index &index, const Query &query) {
  std::vector<double> scores(index.size(), 0.0);
  if (query.embedding.empty()) return scores;
  if (query.embedding.size() != index.dimension()) {
    throw std::invalid_argument("query '" + query.query_id + "' embedding dimension " +
                                std::to_string(query.embedding.size()) + " != corpus dimension " +
                                std::to_string(index.dimension()));
  }
  double qn = 0.0;
  for (double x : query.embedding) qn += x * x;
  qn = std::sqrt(qn);
  if (qn == 0.0) return scores;
  for (std::size_t doc = 0; doc < index.size(); ++doc) {
    const double dn = index.embedding_norm(doc);
    if (dn == 0.0) continue;
    const auto &e = index.document(doc).embedding;
    double dot = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) dot += query.embedding[i] * e[i];
    scores[doc] = dot / (qn * dn);
  }
  return scores;
}

RankedList search(const Index &index, const QueryRequest &request, const Query &query) {
  validate(request);
  const std::size_t n = index.size();
  std::vector<double> total(n, 0.0);
  auto add = [&](std::vector<double> signal, double weight) {
    if (request.normalization == Normalization::min_max) min_max(signal);
    for (std::size_t d = 0; d < n; ++d) total[d] += weight * signal[d];
  };

  // Fixed summation order: lexical, dense, popularity features by name.
  auto weight_of = [&](std::string_view name) {
    auto it = request.weights.find(std::string(name));
    return it == request.weights.end() ? 0.0 : it->second;
  };
  if (const double w = weight_of(kLexicalSignal); w != 0.0) {
    add(lexical_signal(index, query, request.bm25), w);
  }
  if (const double w = weight_of(kDenseSignal); w != 0.0) add(dense_signal(index, query), w);
  for (const auto &[name, w] : request.weights) {
    if (name == kLexicalSignal || name == kDenseSignal || w == 0.0) continue;
    if (auto f = index.feature_index(name)) {
      add(index.log_popularity(*f), w);
    } else {
      add(std::vector<double>(n, 0.0), w);  // unknown feature: all-zero signal
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  const std::size_t k = std::min(request.candidate_k, n);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (total[a] != total[b]) return total[a] > total[b];
                      return a < b;  // documents are stored in item_id order
                    });
  RankedList out;
  out.query_id = query.query_id;
  out.items.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    out.items.push_back({index.document(order[i]).item_id, total[order[i]]});
  }
  return out;
}

std::vector<RankedList> multi_search(const Index &index, std::span<const QueryRequest> requests,
                                     std::span<const Query> queries, unsigned parallelism) {
  if (requests.size() != queries.size()) {
    throw std::invalid_argument("multi_search: " + std::to_string(requests.size()) +
                                " requests for " + std::to_string(queries.size()) + " queries");
  }
  std::vector<RankedList> results(requests.size());
  parallel_for(requests.size(), parallelism, [&](std::size_t i) {
    try {
      results[i] = search(index, requests[i], queries[i]);
    } catch (const std::exception &e) {
      throw BatchError(i, e.what());
    }
  });
  return results;
}

}  // namespace mohpo::retrieval
