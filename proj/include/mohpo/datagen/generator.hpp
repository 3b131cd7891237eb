#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mohpo/objectives/interaction_log.hpp"
#include "mohpo/retrieval/corpus.hpp"
#include "mohpo/retrieval/index.hpp"

namespace mohpo::datagen {

struct Funnel {
  double base_ctr = 0.06;
  double click_to_cart = 0.3;
  double cart_to_purchase = 0.33;
};

/// Popularity features attached to every generated item.
inline const std::vector<std::string> kPopularityFeatures{"sells", "views"};

struct GeneratorSpec {
  std::size_t n_items = 200;
  std::size_t n_queries = 50;       // training queries
  std::size_t n_meta_queries = 50;  // held-out queries, disjoint ids
  std::size_t vocab_size = 500;
  std::size_t embedding_dim = 16;
  std::size_t n_topics = 8;
  std::size_t doc_length = 24;
  std::size_t query_length = 3;
  /// Signal name (lexical, dense, views, sells) -> weight of the planted blend.
  std::map<std::string, double> true_weights{{"lexical", 0.5}, {"dense", 0.3}, {"views", 0.2}};
  /// When set, cart-adds depend on this second blend, so the conversion
  /// optimum differs from the click optimum.
  std::optional<std::map<std::string, double>> conversion_weights;
  /// When set, the meta log follows this blend instead (distribution shift).
  std::optional<std::map<std::string, double>> meta_true_weights;
  Funnel funnel;
  std::int64_t impressions_per_pair = 200;
  /// Slope of the logistic link applied to standardized relevance.
  double relevance_sharpness = 2.0;
  std::uint64_t seed = 0;
};

/// Throws ConfigError naming the offending field.
void validate(const GeneratorSpec &spec);

struct GeneratedData {
  std::vector<retrieval::Document> corpus;
  /// Training queries followed by meta queries.
  std::vector<retrieval::Query> queries;
  objectives::InteractionLog train_log;
  objectives::InteractionLog meta_log;
};

/// Deterministic in the spec (including its seed).
GeneratedData generate(const GeneratorSpec &spec);

/// Per-item relevance of one query under a signal blend: each signal is
/// min-max normalized over the corpus, blended, then standardized.
std::vector<double> planted_relevance(const retrieval::Index &index,
                                      const retrieval::Query &query,
                                      const std::map<std::string, double> &weights);

struct DataFiles {
  std::filesystem::path corpus;
  std::filesystem::path queries;
  std::filesystem::path train_log;
  std::filesystem::path meta_log;
};

DataFiles data_files(const std::filesystem::path &dir);

/// Writes corpus.jsonl, queries.jsonl, train_log.csv and meta_log.csv.
/// Throws std::runtime_error when the directory or a file is not writable.
DataFiles write_generated(const std::filesystem::path &dir, const GeneratedData &data);

}  // namespace mohpo::datagen
