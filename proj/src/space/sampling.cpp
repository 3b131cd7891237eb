#include "mohpo/space/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace mohpo::space {

ParamValue sample_param_uniform(const ParamSpec &spec, Rng &rng) {
  if (const auto *r = std::get_if<ContinuousRange>(&spec.domain)) {
    if (r->scale == Scale::log) {
      const double x = std::exp(rng.uniform(std::log(r->low), std::log(r->high)));
      return std::clamp(x, r->low, r->high);
    }
    return std::clamp(rng.uniform(r->low, r->high), r->low, r->high);
  }
  if (const auto *r = std::get_if<IntegerRange>(&spec.domain)) {
    if (r->scale == Scale::log) {
      const double lo = std::log(static_cast<double>(r->low) - 0.5);
      const double hi = std::log(static_cast<double>(r->high) + 0.5);
      const auto x = static_cast<std::int64_t>(std::llround(std::exp(rng.uniform(lo, hi))));
      return std::clamp(x, r->low, r->high);
    }
    const auto span = static_cast<std::uint64_t>(r->high - r->low) + 1;
    return r->low + static_cast<std::int64_t>(rng.below(span));
  }
  return ChoiceIndex{static_cast<std::size_t>(rng.below(list_size(spec)))};
}

HPConfig sample_uniform(const SearchSpace &space, Rng &rng) {
  HPConfig config;
  for (const auto &p : space.params()) config.set(p.name, sample_param_uniform(p, rng));
  return config;
}

}  // namespace mohpo::space
