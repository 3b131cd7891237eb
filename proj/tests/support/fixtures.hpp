#pragma once

#include <cstdint>
#include <vector>

#include "mohpo/common/rng.hpp"
#include "mohpo/space/trial.hpp"

namespace mohpo::testing {

inline space::SearchSpace unit_space(std::size_t dims = 1) {
  std::vector<space::ParamSpec> params;
  for (std::size_t i = 0; i < dims; ++i) {
    params.push_back({"x" + std::to_string(i), space::ContinuousRange{0.0, 1.0}});
  }
  return space::SearchSpace(std::move(params));
}

inline space::Trial make_trial(std::uint64_t id, std::vector<double> z, double x = 0.0,
                               space::Provenance provenance = space::Provenance::sampled,
                               int stage = 0) {
  space::Trial t;
  t.id = id;
  t.stage = stage;
  t.config.set("x0", x);
  t.objective_values = std::move(z);
  t.provenance = provenance;
  return t;
}

/// `n` trials with `m` objective values each. With `levels` > 0 the values
/// are drawn from a small lattice so that ties are common.
inline space::ObservationDataset random_dataset(Rng &rng, std::size_t n, std::size_t m,
                                                int levels = 0) {
  space::ObservationDataset d;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> z(m);
    for (double &v : z) {
      v = levels > 0 ? static_cast<double>(rng.below(static_cast<std::uint64_t>(levels))) /
                           static_cast<double>(levels)
                     : rng.uniform();
    }
    d.append(make_trial(i, std::move(z), rng.uniform()));
  }
  return d;
}

}  // namespace mohpo::testing
