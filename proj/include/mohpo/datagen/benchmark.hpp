#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mohpo/datagen/generator.hpp"
#include "mohpo/objectives/labels.hpp"
#include "mohpo/retrieval/transform.hpp"
#include "mohpo/study/evaluator.hpp"

namespace mohpo::datagen {

/// CTR and CTCVR objectives scored by nDCG@20 and precision@20.
std::vector<objectives::ObjectiveSpec> default_objectives();

/// One continuous [0, 1] weight per signal.
space::SearchSpace signal_space(const std::vector<std::string> &signals);

/// Binds each signal weight to the same-named HP, min-max normalized.
retrieval::TransformMapping signal_mapping(const std::vector<std::string> &signals,
                                           std::size_t candidate_k = 100);

/// A generated dataset wired to training and meta evaluators.
struct Benchmark {
  GeneratedData data;
  std::shared_ptr<const retrieval::Index> index;
  space::SearchSpace space;
  retrieval::TransformMapping mapping;
  std::vector<objectives::ObjectiveSpec> specs;
  std::shared_ptr<const study::Evaluator> train;
  std::shared_ptr<const study::Evaluator> meta;
};

/// Default signals: lexical, dense, views.
Benchmark make_benchmark(const GeneratorSpec &spec,
                         std::vector<objectives::ObjectiveSpec> specs = default_objectives(),
                         std::vector<std::string> signals = {"lexical", "dense", "views"},
                         unsigned parallelism = 1);

}  // namespace mohpo::datagen
