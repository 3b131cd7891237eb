#include "mohpo/datagen/generator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "mohpo/common/errors.hpp"
#include "mohpo/common/rng.hpp"
#include "mohpo/retrieval/search.hpp"

namespace mohpo::datagen {

namespace {

constexpr double kTopicTermShare = 0.4;
constexpr double kQueryTopicShare = 0.7;
constexpr std::size_t kTermsPerTopic = 15;
constexpr double kEmbeddingNoise = 0.35;

double normal(Rng &rng) {
  // Box-Muller; 1 - u keeps the log argument positive.
  const double u = 1.0 - rng.uniform();
  const double v = rng.uniform();
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * v);
}

std::int64_t binomial(Rng &rng, std::int64_t n, double p) {
  if (n <= 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;
  std::binomial_distribution<std::int64_t> dist(n, p);
  return dist(rng.engine());
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::string padded(char prefix, std::size_t index, std::size_t count) {
  const std::size_t width = std::max<std::size_t>(4, std::to_string(count).size());
  std::string digits = std::to_string(index);
  return std::string(1, prefix) + std::string(width - std::min(width, digits.size()), '0') + digits;
}

class Zipf {
 public:
  Zipf(std::size_t n, double exponent) : cumulative_(n) {
    double total = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      total += 1.0 / std::pow(static_cast<double>(r + 1), exponent);
      cumulative_[r] = total;
    }
    for (double &c : cumulative_) c /= total;
  }
  std::size_t draw(Rng &rng) const {
    const double u = rng.uniform();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()),
                                 cumulative_.size() - 1);
  }

 private:
  std::vector<double> cumulative_;
};

struct Topics {
  std::vector<std::vector<std::size_t>> terms;
  std::vector<std::vector<double>> centroids;
};

Topics make_topics(const GeneratorSpec &spec, Rng &rng) {
  Topics topics;
  for (std::size_t t = 0; t < spec.n_topics; ++t) {
    std::vector<std::size_t> terms;
    const std::size_t want = std::min(kTermsPerTopic, spec.vocab_size);
    while (terms.size() < want) {
      const std::size_t term = rng.below(spec.vocab_size);
      if (std::find(terms.begin(), terms.end(), term) == terms.end()) terms.push_back(term);
    }
    topics.terms.push_back(std::move(terms));
    std::vector<double> c(spec.embedding_dim);
    double norm = 0.0;
    for (double &x : c) {
      x = normal(rng);
      norm += x * x;
    }
    norm = std::sqrt(norm);
    for (double &x : c) x = norm > 0.0 ? x / norm : 0.0;
    topics.centroids.push_back(std::move(c));
  }
  return topics;
}

std::string term_name(std::size_t term) { return "t" + std::to_string(term); }

std::vector<std::string> draw_tokens(std::size_t count, double topic_share,
                                     const std::vector<std::size_t> &topic_terms, const Zipf &zipf,
                                     Rng &rng) {
  std::vector<std::string> tokens;
  tokens.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const bool from_topic = rng.uniform() < topic_share;
    const std::size_t term =
        from_topic ? topic_terms[rng.below(topic_terms.size())] : zipf.draw(rng);
    tokens.push_back(term_name(term));
  }
  return tokens;
}

std::vector<double> draw_embedding(const std::vector<double> &centroid, double noise, Rng &rng) {
  std::vector<double> e(centroid.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = centroid[i] + noise * normal(rng);
  return e;
}

std::vector<retrieval::Query> make_queries(std::size_t count, std::size_t first_index,
                                           std::size_t total, const GeneratorSpec &spec,
                                           const Topics &topics, const Zipf &zipf, Rng &rng) {
  std::vector<retrieval::Query> out;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t topic = rng.below(spec.n_topics);
    retrieval::Query q;
    q.query_id = padded('q', first_index + i, total);
    q.tokens = draw_tokens(spec.query_length, kQueryTopicShare, topics.terms[topic], zipf, rng);
    q.embedding = draw_embedding(topics.centroids[topic], kEmbeddingNoise, rng);
    q.category_id = "c" + std::to_string(topic);
    out.push_back(std::move(q));
  }
  return out;
}

objectives::InteractionLog make_log(const retrieval::Index &index,
                                    const std::vector<retrieval::Query> &queries,
                                    const std::map<std::string, double> &click_weights,
                                    const GeneratorSpec &spec, Rng &rng) {
  objectives::InteractionLog log;
  const auto &f = spec.funnel;
  for (const auto &q : queries) {
    const auto rel = planted_relevance(index, q, click_weights);
    std::vector<double> conv;
    if (spec.conversion_weights) conv = planted_relevance(index, q, *spec.conversion_weights);
    for (std::size_t d = 0; d < index.size(); ++d) {
      objectives::EventCounts c;
      c.impressions = spec.impressions_per_pair;
      c.clicks = binomial(rng, c.impressions,
                          f.base_ctr * logistic(spec.relevance_sharpness * rel[d]));
      double to_cart = f.click_to_cart;
      if (!conv.empty()) to_cart *= logistic(spec.relevance_sharpness * conv[d]);
      c.carts = binomial(rng, c.clicks, to_cart);
      c.purchases = binomial(rng, c.carts, f.cart_to_purchase);
      log.add(q.query_id, index.document(d).item_id, c);
    }
  }
  return log;
}

void check_blend(const std::map<std::string, double> &weights, const std::string &field) {
  bool any = false;
  for (const auto &[name, w] : weights) {
    const bool known = name == retrieval::kLexicalSignal || name == retrieval::kDenseSignal ||
                       std::find(kPopularityFeatures.begin(), kPopularityFeatures.end(), name) !=
                           kPopularityFeatures.end();
    if (!known) throw ConfigError(field + ": unknown signal '" + name + "'");
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw ConfigError(field + "." + name + ": weights must be finite and >= 0");
    }
    any = any || w > 0.0;
  }
  if (!any) throw ConfigError(field + ": at least one weight must be positive");
}

}  // namespace

void validate(const GeneratorSpec &spec) {
  auto positive = [](std::size_t v, const char *field) {
    if (v < 1) throw ConfigError(std::string(field) + " must be >= 1");
  };
  positive(spec.n_items, "n_items");
  positive(spec.n_queries, "n_queries");
  positive(spec.n_meta_queries, "n_meta_queries");
  positive(spec.vocab_size, "vocab_size");
  positive(spec.embedding_dim, "embedding_dim");
  positive(spec.n_topics, "n_topics");
  positive(spec.doc_length, "doc_length");
  positive(spec.query_length, "query_length");
  if (spec.impressions_per_pair < 1) throw ConfigError("impressions_per_pair must be >= 1");
  auto probability = [](double p, const char *field) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(std::string(field) + " must lie in [0, 1]");
  };
  probability(spec.funnel.base_ctr, "funnel.base_ctr");
  probability(spec.funnel.click_to_cart, "funnel.click_to_cart");
  probability(spec.funnel.cart_to_purchase, "funnel.cart_to_purchase");
  if (!std::isfinite(spec.relevance_sharpness) || spec.relevance_sharpness < 0.0) {
    throw ConfigError("relevance_sharpness must be finite and >= 0");
  }
  check_blend(spec.true_weights, "true_weights");
  if (spec.conversion_weights) check_blend(*spec.conversion_weights, "conversion_weights");
  if (spec.meta_true_weights) check_blend(*spec.meta_true_weights, "meta_true_weights");
}

std::vector<double> planted_relevance(const retrieval::Index &index, const retrieval::Query &query,
                                      const std::map<std::string, double> &weights) {
  retrieval::QueryRequest request;
  request.query_id = query.query_id;
  request.weights = weights;
  request.candidate_k = index.size();
  request.normalization = retrieval::Normalization::min_max;
  // The blend is exactly what the engine computes for these weights.
  const auto ranked = retrieval::search(index, request, query);
  std::vector<double> blend(index.size(), 0.0);
  for (const auto &item : ranked.items) blend[*index.find(item.item_id)] = item.score;

  const double n = static_cast<double>(blend.size());
  const double mean = std::accumulate(blend.begin(), blend.end(), 0.0) / n;
  double var = 0.0;
  for (double x : blend) var += (x - mean) * (x - mean);
  const double sd = std::sqrt(var / n);
  for (double &x : blend) x = sd > 0.0 ? (x - mean) / sd : 0.0;
  return blend;
}

GeneratedData generate(const GeneratorSpec &spec) {
  validate(spec);
  Rng rng(spec.seed);
  const Zipf zipf(spec.vocab_size, 1.1);
  const Topics topics = make_topics(spec, rng);

  GeneratedData data;
  for (std::size_t i = 0; i < spec.n_items; ++i) {
    const std::size_t topic = rng.below(spec.n_topics);
    retrieval::Document doc;
    doc.item_id = padded('i', i, spec.n_items);
    doc.tokens = draw_tokens(spec.doc_length, kTopicTermShare, topics.terms[topic], zipf, rng);
    doc.embedding = draw_embedding(topics.centroids[topic], kEmbeddingNoise, rng);
    // Pareto tail for views, a per-item conversion share for sells.
    const double views = std::floor(10.0 / std::pow(1.0 - rng.uniform(), 1.0 / 1.2));
    const double share = 0.02 + 0.08 * rng.uniform();
    doc.popularity["views"] = views;
    doc.popularity["sells"] =
        static_cast<double>(binomial(rng, static_cast<std::int64_t>(views), share));
    data.corpus.push_back(std::move(doc));
  }

  const std::size_t total = spec.n_queries + spec.n_meta_queries;
  auto train = make_queries(spec.n_queries, 0, total, spec, topics, zipf, rng);
  auto meta = make_queries(spec.n_meta_queries, spec.n_queries, total, spec, topics, zipf, rng);

  const auto index = retrieval::Index::build(data.corpus);
  data.train_log = make_log(index, train, spec.true_weights, spec, rng);
  data.meta_log = make_log(index, meta, spec.meta_true_weights.value_or(spec.true_weights), spec, rng);

  data.queries = std::move(train);
  data.queries.insert(data.queries.end(), meta.begin(), meta.end());
  return data;
}

DataFiles data_files(const std::filesystem::path &dir) {
  return {dir / "corpus.jsonl", dir / "queries.jsonl", dir / "train_log.csv", dir / "meta_log.csv"};
}

DataFiles write_generated(const std::filesystem::path &dir, const GeneratedData &data) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  const DataFiles files = data_files(dir);
  auto open = [](const std::filesystem::path &p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    return out;
  };
  {
    auto out = open(files.corpus);
    retrieval::write_corpus_jsonl(out, data.corpus);
  }
  {
    auto out = open(files.queries);
    retrieval::write_queries_jsonl(out, data.queries);
  }
  {
    auto out = open(files.train_log);
    objectives::write_log_csv(out, data.train_log);
  }
  {
    auto out = open(files.meta_log);
    objectives::write_log_csv(out, data.meta_log);
  }
  return files;
}

}  // namespace mohpo::datagen
