#include "mohpo/sampling/sampler.hpp"

#include <limits>

#include "mohpo/common/errors.hpp"
#include "mohpo/space/sampling.hpp"

namespace mohpo::sampling {

namespace {

std::size_t axis_size(const space::ParamSpec &p) {
  if (space::is_list_domain(p)) return space::list_size(p);
  if (const auto *r = std::get_if<space::IntegerRange>(&p.domain)) {
    return static_cast<std::size_t>(r->high - r->low) + 1;
  }
  throw ConfigError("grid sampler: param '" + p.name +
                    "' is a continuous range; declare explicit grid points");
}

}  // namespace

std::optional<space::HPConfig> RandomSampler::next(const space::SearchSpace &space,
                                                   const space::ObservationDataset &,
                                                   std::span<const space::Direction>,
                                                   Rng &rng) const {
  return space::sample_uniform(space, rng);
}

std::size_t grid_size(const space::SearchSpace &space) {
  std::size_t total = 1;
  for (const auto &p : space.params()) {
    const std::size_t n = axis_size(p);
    if (n != 0 && total > std::numeric_limits<std::size_t>::max() / n) {
      throw ConfigError("grid sampler: grid is too large to enumerate");
    }
    total *= n;
  }
  return total;
}

space::HPConfig grid_point(const space::SearchSpace &space, std::size_t index) {
  const auto &params = space.params();
  std::vector<std::size_t> digits(params.size());
  for (std::size_t i = params.size(); i-- > 0;) {
    const std::size_t n = axis_size(params[i]);
    digits[i] = index % n;
    index /= n;
  }
  space::HPConfig config;
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (const auto *r = std::get_if<space::IntegerRange>(&params[i].domain)) {
      config.set(params[i].name, r->low + static_cast<std::int64_t>(digits[i]));
    } else {
      config.set(params[i].name, space::ChoiceIndex{digits[i]});
    }
  }
  return config;
}

std::optional<space::HPConfig> grid_next(const space::SearchSpace &space,
                                         const space::ObservationDataset &dataset) {
  const std::size_t total = grid_size(space);
  const std::size_t cursor = dataset.count(space::Provenance::sampled);
  if (cursor >= total) return std::nullopt;
  return grid_point(space, cursor);
}

std::optional<space::HPConfig> GridSampler::next(const space::SearchSpace &space,
                                                 const space::ObservationDataset &dataset,
                                                 std::span<const space::Direction>,
                                                 Rng &) const {
  return grid_next(space, dataset);
}

}  // namespace mohpo::sampling
