#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mohpo/objectives/evaluation.hpp"
#include "mohpo/objectives/interaction_log.hpp"
#include "mohpo/objectives/labels.hpp"
#include "mohpo/retrieval/corpus.hpp"
#include "mohpo/retrieval/index.hpp"
#include "mohpo/retrieval/transform.hpp"
#include "mohpo/space/search_space.hpp"

namespace mohpo::study {

/// One evaluation split: transform -> multi_search -> evaluate_objectives for
/// a configuration over a fixed query set and its derived labels. Training,
/// meta evaluation and the grid oracle all go through this single path.
class Evaluator {
 public:
  Evaluator(std::shared_ptr<const retrieval::Index> index, std::vector<retrieval::Query> queries,
            const objectives::InteractionLog &log, std::vector<objectives::ObjectiveSpec> specs,
            space::SearchSpace space, retrieval::TransformMapping mapping,
            unsigned parallelism = 1);

  objectives::ObjectiveEvaluation evaluate(const space::HPConfig &config) const;

  std::vector<retrieval::RankedList> rank(const space::HPConfig &config) const;

  const std::vector<retrieval::Query> &queries() const noexcept { return queries_; }
  std::vector<std::string> query_ids() const;
  const std::vector<objectives::ObjectiveSpec> &specs() const noexcept { return specs_; }
  const std::vector<objectives::LabelSet> &labels() const noexcept { return labels_; }
  const space::SearchSpace &space() const noexcept { return space_; }
  const retrieval::TransformMapping &mapping() const noexcept { return mapping_; }
  const retrieval::Index &index() const noexcept { return *index_; }

  unsigned parallelism() const noexcept { return parallelism_; }
  void set_parallelism(unsigned parallelism) noexcept { parallelism_ = parallelism; }

 private:
  std::shared_ptr<const retrieval::Index> index_;
  std::vector<retrieval::Query> queries_;
  std::vector<objectives::ObjectiveSpec> specs_;
  std::vector<objectives::LabelSet> labels_;
  space::SearchSpace space_;
  retrieval::TransformMapping mapping_;
  unsigned parallelism_;
};

/// Queries whose id appears in `log`, ascending by id.
std::vector<retrieval::Query> queries_in_log(const std::vector<retrieval::Query> &queries,
                                             const objectives::InteractionLog &log);

}  // namespace mohpo::study
