#include "mohpo/study/evaluator.hpp"

#include <algorithm>
#include <set>

#include "mohpo/common/errors.hpp"
#include "mohpo/retrieval/search.hpp"

namespace mohpo::study {

Evaluator::Evaluator(std::shared_ptr<const retrieval::Index> index,
                     std::vector<retrieval::Query> queries, const objectives::InteractionLog &log,
                     std::vector<objectives::ObjectiveSpec> specs, space::SearchSpace space,
                     retrieval::TransformMapping mapping, unsigned parallelism)
    : index_(std::move(index)),
      queries_(std::move(queries)),
      specs_(std::move(specs)),
      space_(std::move(space)),
      mapping_(std::move(mapping)),
      parallelism_(parallelism) {
  if (!index_) throw std::invalid_argument("Evaluator: null index");
  if (queries_.empty()) throw ConfigError("evaluation split has no queries");
  if (specs_.empty()) throw ConfigError("at least one objective is required");
  std::sort(queries_.begin(), queries_.end(),
            [](const auto &a, const auto &b) { return a.query_id < b.query_id; });
  for (std::size_t i = 1; i < queries_.size(); ++i) {
    if (queries_[i].query_id == queries_[i - 1].query_id) {
      throw DataError("duplicate query id '" + queries_[i].query_id + "'");
    }
  }
  for (const auto &name : mapping_.referenced_params()) {
    if (!space_.find(name)) {
      throw ConfigError("transform mapping references param '" + name +
                        "' which is not in the search space");
    }
  }
  labels_.reserve(specs_.size());
  for (const auto &spec : specs_) {
    objectives::validate(spec);
    labels_.push_back(objectives::derive_labels(log, spec));
  }
}

std::vector<retrieval::RankedList> Evaluator::rank(const space::HPConfig &config) const {
  std::vector<retrieval::QueryRequest> requests;
  requests.reserve(queries_.size());
  for (const auto &q : queries_) requests.push_back(retrieval::transform(space_, config, q, mapping_));
  return retrieval::multi_search(*index_, requests, queries_, parallelism_);
}

objectives::ObjectiveEvaluation Evaluator::evaluate(const space::HPConfig &config) const {
  const auto ranked = rank(config);
  return objectives::evaluate_objectives(ranked, labels_, specs_);
}

std::vector<std::string> Evaluator::query_ids() const {
  std::vector<std::string> ids;
  ids.reserve(queries_.size());
  for (const auto &q : queries_) ids.push_back(q.query_id);
  return ids;
}

std::vector<retrieval::Query> queries_in_log(const std::vector<retrieval::Query> &queries,
                                             const objectives::InteractionLog &log) {
  const auto ids = log.query_ids();
  const std::set<std::string> wanted(ids.begin(), ids.end());
  std::vector<retrieval::Query> out;
  for (const auto &q : queries) {
    if (wanted.count(q.query_id)) out.push_back(q);
  }
  std::sort(out.begin(), out.end(),
            [](const auto &a, const auto &b) { return a.query_id < b.query_id; });
  return out;
}

}  // namespace mohpo::study
