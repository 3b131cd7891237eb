#include "mohpo/datagen/benchmark.hpp"

namespace mohpo::datagen {

std::vector<objectives::ObjectiveSpec> default_objectives() {
  using objectives::MetricKind;
  objectives::ObjectiveSpec ctr;
  ctr.name = "ctr";
  ctr.numerator = objectives::Event::clicks;
  ctr.min_impressions = 10;
  ctr.smoothing = objectives::Smoothing{1.0, 30.0};
  ctr.positive_threshold = 0.05;
  ctr.metrics = {{MetricKind::ndcg, 20}, {MetricKind::precision, 20}};

  objectives::ObjectiveSpec ctcvr = ctr;
  ctcvr.name = "ctcvr";
  ctcvr.numerator = objectives::Event::purchases;
  ctcvr.smoothing = objectives::Smoothing{0.1, 30.0};
  ctcvr.positive_threshold = 0.005;
  return {ctr, ctcvr};
}

space::SearchSpace signal_space(const std::vector<std::string> &signals) {
  std::vector<space::ParamSpec> params;
  for (const auto &s : signals) params.push_back({s, space::ContinuousRange{0.0, 1.0}});
  return space::SearchSpace(std::move(params));
}

retrieval::TransformMapping signal_mapping(const std::vector<std::string> &signals,
                                           std::size_t candidate_k) {
  retrieval::TransformMapping mapping;
  for (const auto &s : signals) mapping.weights[s] = retrieval::ParamRef{s};
  mapping.candidate_k = static_cast<double>(candidate_k);
  mapping.normalization = retrieval::Normalization::min_max;
  return mapping;
}

Benchmark make_benchmark(const GeneratorSpec &spec, std::vector<objectives::ObjectiveSpec> specs,
                         std::vector<std::string> signals, unsigned parallelism) {
  Benchmark b;
  b.data = generate(spec);
  b.index = std::make_shared<const retrieval::Index>(retrieval::Index::build(b.data.corpus));
  b.space = signal_space(signals);
  b.mapping = signal_mapping(signals);
  b.specs = std::move(specs);
  b.train = std::make_shared<const study::Evaluator>(
      b.index, study::queries_in_log(b.data.queries, b.data.train_log), b.data.train_log, b.specs,
      b.space, b.mapping, parallelism);
  b.meta = std::make_shared<const study::Evaluator>(
      b.index, study::queries_in_log(b.data.queries, b.data.meta_log), b.data.meta_log, b.specs,
      b.space, b.mapping, parallelism);
  return b;
}

}  // namespace mohpo::datagen
