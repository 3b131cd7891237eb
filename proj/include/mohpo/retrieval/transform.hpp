#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mohpo/retrieval/corpus.hpp"
#include "mohpo/retrieval/request.hpp"
#include "mohpo/space/search_space.hpp"

namespace mohpo::retrieval {

/// A request field is either a constant or the name of the HP supplying it.
struct ParamRef {
  std::string name;
  bool operator==(const ParamRef &) const = default;
};

using NumericBinding = std::variant<double, ParamRef>;
using NormalizationBinding = std::variant<Normalization, ParamRef>;

/// Declares how a configuration reshapes a query request.
struct TransformMapping {
  std::map<std::string, NumericBinding> weights;
  NumericBinding candidate_k = 100.0;
  NormalizationBinding normalization = Normalization::none;
  std::optional<NumericBinding> bm25_k1;
  std::optional<NumericBinding> bm25_b;

  /// Every HP name the mapping reads, sorted and unique.
  std::vector<std::string> referenced_params() const;
};

/// Pure: identical (config, query, mapping) give identical requests.
/// Throws ConfigError when a referenced HP is absent from the space or the
/// config, when a bound value has the wrong type, or when all weights are 0.
QueryRequest transform(const space::SearchSpace &space, const space::HPConfig &config,
                       const Query &query, const TransformMapping &mapping);

}  // namespace mohpo::retrieval
