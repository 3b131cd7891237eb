#include "mohpo/retrieval/index.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "mohpo/common/errors.hpp"
#include "mohpo/retrieval/request.hpp"

namespace mohpo::retrieval {

Index Index::build(std::vector<Document> corpus) {
  if (corpus.empty()) throw DataError("index build: empty corpus");
  std::sort(corpus.begin(), corpus.end(),
            [](const Document &a, const Document &b) { return a.item_id < b.item_id; });

  Index index;
  index.dimension_ = corpus.front().embedding.size();
  std::set<std::string> features;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const Document &d = corpus[i];
    if (i > 0 && corpus[i - 1].item_id == d.item_id) {
      throw DataError("index build: duplicate item_id '" + d.item_id + "'");
    }
    if (d.embedding.size() != index.dimension_) {
      throw DataError("index build: item '" + d.item_id + "' has embedding dimension " +
                      std::to_string(d.embedding.size()) + ", expected " +
                      std::to_string(index.dimension_));
    }
    for (const auto &[name, count] : d.popularity) {
      if (!(count >= 0.0) || !std::isfinite(count)) {
        throw DataError("index build: item '" + d.item_id + "' has invalid count for '" + name +
                        "'");
      }
      if (name == kLexicalSignal || name == kDenseSignal) {
        throw DataError("index build: popularity feature name '" + name + "' is reserved");
      }
      features.insert(name);
    }
  }

  index.features_.assign(features.begin(), features.end());
  index.log_popularity_.assign(index.features_.size(), std::vector<double>(corpus.size(), 0.0));
  index.lengths_.resize(corpus.size());
  index.norms_.resize(corpus.size());
  double total_length = 0.0;
  for (std::size_t doc = 0; doc < corpus.size(); ++doc) {
    const Document &d = corpus[doc];
    std::unordered_map<std::string, std::uint32_t> tf;
    for (const auto &t : d.tokens) ++tf[t];
    for (const auto &[term, count] : tf) {
      index.postings_[term].push_back({static_cast<std::uint32_t>(doc), count});
    }
    index.lengths_[doc] = static_cast<std::uint32_t>(d.tokens.size());
    total_length += static_cast<double>(d.tokens.size());
    double sq = 0.0;
    for (double x : d.embedding) sq += x * x;
    index.norms_[doc] = std::sqrt(sq);
    for (std::size_t f = 0; f < index.features_.size(); ++f) {
      auto it = d.popularity.find(index.features_[f]);
      if (it != d.popularity.end()) index.log_popularity_[f][doc] = std::log1p(it->second);
    }
  }
  index.avgdl_ = total_length / static_cast<double>(corpus.size());
  index.docs_ = std::move(corpus);
  return index;
}

std::size_t Index::document_frequency(std::string_view term) const {
  const auto *p = postings(term);
  return p ? p->size() : 0;
}

const std::vector<Posting> *Index::postings(std::string_view term) const {
  auto it = postings_.find(std::string(term));
  return it == postings_.end() ? nullptr : &it->second;
}

std::optional<std::size_t> Index::find(std::string_view item_id) const {
  auto it = std::lower_bound(docs_.begin(), docs_.end(), item_id,
                             [](const Document &d, std::string_view id) { return d.item_id < id; });
  if (it == docs_.end() || it->item_id != item_id) return std::nullopt;
  return static_cast<std::size_t>(it - docs_.begin());
}

std::optional<std::size_t> Index::feature_index(std::string_view name) const {
  auto it = std::lower_bound(features_.begin(), features_.end(), name);
  if (it == features_.end() || *it != name) return std::nullopt;
  return static_cast<std::size_t>(it - features_.begin());
}

}  // namespace mohpo::retrieval
