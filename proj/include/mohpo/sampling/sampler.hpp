#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string_view>

#include <nlohmann/json.hpp>

#include "mohpo/common/rng.hpp"
#include "mohpo/space/direction.hpp"
#include "mohpo/space/search_space.hpp"
#include "mohpo/space/trial.hpp"

namespace mohpo::sampling {

/// Proposal strategy: h_t drawn from the space given the observations so far.
///
/// next() is deterministic in (space, dataset, rng state) and never returns an
/// out-of-domain configuration. An empty optional means the sampler has no
/// configurations left to propose (grid exhaustion).
class Sampler {
 public:
  virtual ~Sampler() = default;

  virtual std::string_view name() const = 0;
  virtual std::optional<space::HPConfig> next(const space::SearchSpace &space,
                                              const space::ObservationDataset &dataset,
                                              std::span<const space::Direction> directions,
                                              Rng &rng) const = 0;
  /// Settings echoed into the report header.
  virtual nlohmann::ordered_json settings() const { return nlohmann::ordered_json::object(); }
};

class RandomSampler final : public Sampler {
 public:
  std::string_view name() const override { return "random"; }
  std::optional<space::HPConfig> next(const space::SearchSpace &space,
                                      const space::ObservationDataset &dataset,
                                      std::span<const space::Direction> directions,
                                      Rng &rng) const override;
};

/// Cartesian product of the declared points in lexicographic order of the
/// parameter declaration (first parameter varies slowest). The cursor is the
/// number of sampled trials already in the dataset.
class GridSampler final : public Sampler {
 public:
  std::string_view name() const override { return "grid"; }
  std::optional<space::HPConfig> next(const space::SearchSpace &space,
                                      const space::ObservationDataset &dataset,
                                      std::span<const space::Direction> directions,
                                      Rng &rng) const override;
};

/// Number of grid combinations; throws ConfigError for continuous ranges.
std::size_t grid_size(const space::SearchSpace &space);

/// The grid point at position `index` of the lexicographic enumeration.
space::HPConfig grid_point(const space::SearchSpace &space, std::size_t index);

/// Shorthand used by tests and the grid sampler.
std::optional<space::HPConfig> grid_next(const space::SearchSpace &space,
                                         const space::ObservationDataset &dataset);

}  // namespace mohpo::sampling
