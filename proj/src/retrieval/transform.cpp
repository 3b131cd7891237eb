#include "mohpo/retrieval/transform.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "mohpo/common/errors.hpp"

namespace mohpo::retrieval {

namespace {

const space::ParamSpec &lookup(const space::SearchSpace &space, const space::HPConfig &config,
                               const std::string &name, const space::ParamValue *&value) {
  const space::ParamSpec *spec = space.find(name);
  value = config.find(name);
  if (!spec || !value) {
    throw ConfigError("transform: mapping references param '" + name +
                      "' absent from the configuration");
  }
  return *spec;
}

double resolve(const space::SearchSpace &space, const space::HPConfig &config,
               const NumericBinding &binding) {
  if (const double *d = std::get_if<double>(&binding)) return *d;
  const auto &name = std::get<ParamRef>(binding).name;
  const space::ParamValue *value = nullptr;
  const auto &spec = lookup(space, config, name, value);
  return space::numeric_value(spec, *value);
}

Normalization resolve(const space::SearchSpace &space, const space::HPConfig &config,
                      const NormalizationBinding &binding) {
  if (const auto *n = std::get_if<Normalization>(&binding)) return *n;
  const auto &name = std::get<ParamRef>(binding).name;
  const space::ParamValue *value = nullptr;
  const auto &spec = lookup(space, config, name, value);
  if (!space::is_list_domain(spec)) {
    throw ConfigError("transform: normalization param '" + name + "' must be categorical");
  }
  return parse_normalization(space::format_value(spec, *value));
}

void collect(const NumericBinding &b, std::set<std::string> &out) {
  if (const auto *r = std::get_if<ParamRef>(&b)) out.insert(r->name);
}

}  // namespace

std::vector<std::string> TransformMapping::referenced_params() const {
  std::set<std::string> names;
  for (const auto &[signal, b] : weights) collect(b, names);
  collect(candidate_k, names);
  if (const auto *r = std::get_if<ParamRef>(&normalization)) names.insert(r->name);
  if (bm25_k1) collect(*bm25_k1, names);
  if (bm25_b) collect(*bm25_b, names);
  return {names.begin(), names.end()};
}

QueryRequest transform(const space::SearchSpace &space, const space::HPConfig &config,
                       const Query &query, const TransformMapping &mapping) {
  QueryRequest request;
  request.query_id = query.query_id;
  bool any_nonzero = false;
  for (const auto &[signal, binding] : mapping.weights) {
    const double w = resolve(space, config, binding);
    if (!std::isfinite(w)) throw ConfigError("transform: weight '" + signal + "' is not finite");
    request.weights[signal] = w;
    any_nonzero = any_nonzero || w != 0.0;
  }
  if (!any_nonzero) {
    throw ConfigError("transform: every signal weight is zero; at least one must be non-zero");
  }

  const double k = resolve(space, config, mapping.candidate_k);
  if (!(k >= 1.0) || std::abs(k - std::round(k)) > 1e-9) {
    throw ConfigError("transform: candidate_k must be an integer >= 1");
  }
  request.candidate_k = static_cast<std::size_t>(std::llround(k));
  request.normalization = resolve(space, config, mapping.normalization);
  if (mapping.bm25_k1) request.bm25.k1 = resolve(space, config, *mapping.bm25_k1);
  if (mapping.bm25_b) request.bm25.b = resolve(space, config, *mapping.bm25_b);
  return request;
}

}  // namespace mohpo::retrieval
