#pragma once

#include "mohpo/common/rng.hpp"
#include "mohpo/space/search_space.hpp"

namespace mohpo::space {

/// Draws one value uniformly over the parameter's domain (log-uniform for
/// log-scaled ranges).
ParamValue sample_param_uniform(const ParamSpec &spec, Rng &rng);

/// Draws every parameter independently and uniformly, in declaration order.
HPConfig sample_uniform(const SearchSpace &space, Rng &rng);

}  // namespace mohpo::space
