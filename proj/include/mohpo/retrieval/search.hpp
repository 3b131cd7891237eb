#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mohpo/retrieval/index.hpp"
#include "mohpo/retrieval/request.hpp"

namespace mohpo::retrieval {

/// Okapi BM25 of one document: Σ over query tokens (with repetition) of
/// idf · tf·(k1+1) / (tf + k1·(1 − b + b·len/avgdl)),
/// idf = ln(1 + (N − df + 0.5)/(df + 0.5)).
double bm25_score(const Index &index, std::span<const std::string> query_tokens,
                  std::size_t doc, const Bm25Params &params = {});

/// Cosine similarity, 0 when either vector has zero norm.
double cosine(std::span<const double> a, std::span<const double> b);

/// Scores every document as
///   w_lex·bm25 + w_dense·cos(q, d) + Σ_f w_f·ln(1 + popularity_f)
/// (each signal min-max scaled over the corpus first when requested) and
/// returns the top candidate_k, ties broken by ascending item_id.
RankedList search(const Index &index, const QueryRequest &request, const Query &query);

/// Raw per-document signal values, in document order. Exposed for the data
/// generator and for tests.
std::vector<double> lexical_signal(const Index &index, const Query &query,
                                   const Bm25Params &params = {});
std::vector<double> dense_signal(const Index &index, const Query &query);

class BatchError : public std::runtime_error {
 public:
  BatchError(std::size_t position, const std::string &what)
      : std::runtime_error("batch element " + std::to_string(position) + ": " + what),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Element-wise search over aligned batches, using up to `parallelism`
/// threads (0 = all cores). Output position i always answers request i.
std::vector<RankedList> multi_search(const Index &index, std::span<const QueryRequest> requests,
                                     std::span<const Query> queries, unsigned parallelism = 1);

}  // namespace mohpo::retrieval
