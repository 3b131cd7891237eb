#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mohpo/retrieval/corpus.hpp"

namespace mohpo::retrieval {

struct Posting {
  std::uint32_t doc = 0;
  std::uint32_t tf = 0;
};

/// Immutable in-memory index: inverted lists with term frequencies, document
/// lengths, corpus statistics, embeddings and popularity features.
///
/// Documents are stored in ascending item_id order, so the internal document
/// number doubles as the tie-break key and corpus insertion order never
/// affects results.
class Index {
 public:
  /// Throws DataError for an empty corpus, non-uniform embedding dimension,
  /// duplicate item ids, negative counts, or reserved feature names.
  static Index build(std::vector<Document> corpus);

  std::size_t size() const noexcept { return docs_.size(); }
  std::size_t dimension() const noexcept { return dimension_; }
  double average_length() const noexcept { return avgdl_; }
  std::uint32_t length(std::size_t doc) const { return lengths_.at(doc); }
  std::size_t document_frequency(std::string_view term) const;
  /// Postings sorted by document number, or nullptr for unknown terms.
  const std::vector<Posting> *postings(std::string_view term) const;
  std::size_t term_count() const noexcept { return postings_.size(); }

  const Document &document(std::size_t doc) const { return docs_.at(doc); }
  std::optional<std::size_t> find(std::string_view item_id) const;
  double embedding_norm(std::size_t doc) const { return norms_.at(doc); }

  /// Popularity feature names, sorted.
  const std::vector<std::string> &popularity_features() const noexcept { return features_; }
  std::optional<std::size_t> feature_index(std::string_view name) const;
  /// ln(1 + count) of `feature` for every document; missing counts are 0.
  const std::vector<double> &log_popularity(std::size_t feature) const {
    return log_popularity_.at(feature);
  }

 private:
  std::vector<Document> docs_;
  std::unordered_map<std::string, std::vector<Posting>> postings_;
  std::vector<std::uint32_t> lengths_;
  std::vector<double> norms_;
  std::vector<std::string> features_;
  std::vector<std::vector<double>> log_popularity_;
  std::size_t dimension_ = 0;
  double avgdl_ = 0.0;
};

}  // namespace mohpo::retrieval
