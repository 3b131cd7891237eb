#pragma once

#include <span>
#include <variant>
#include <vector>

#include "mohpo/common/rng.hpp"
#include "mohpo/space/search_space.hpp"

namespace mohpo::sampling {

struct TpeSettings {
  double gamma_quantile = 0.25;
  std::size_t n_startup = 10;
  std::size_t n_candidates = 24;
  /// Lower bound on the kernel bandwidth, as a fraction of the parameter range.
  double bandwidth_floor = 1e-3;
  double categorical_prior = 1.0;
};

/// Throws std::invalid_argument when a setting is out of bounds.
void validate(const TpeSettings &settings);

/// Mixture of truncated Gaussian kernels, one per observation, over a numeric
/// parameter. Kernels live in the parameter's scale space (log space for log
/// parameters) and are renormalized to the domain. With no observations the
/// model is uniform over the domain.
class KernelMixture {
 public:
  KernelMixture(const space::ParamSpec &spec, std::span<const double> observations,
                const TpeSettings &settings);

  space::ParamValue sample(Rng &rng) const;
  /// Log density with respect to the parameter's own value space; for integer
  /// parameters this is the log probability mass of the value.
  double log_density(const space::ParamValue &value) const;

  double bandwidth() const noexcept { return bandwidth_; }
  const std::vector<double> &centers() const noexcept { return centers_; }

 private:
  double kernel_mass(std::size_t i, double a, double b) const;

  bool integer_ = false;
  bool log_scale_ = false;
  std::int64_t int_low_ = 0;
  std::int64_t int_high_ = 0;
  double value_low_ = 0.0;
  double value_high_ = 0.0;
  double low_ = 0.0;   // scale-space domain
  double high_ = 0.0;
  double bandwidth_ = 1.0;
  std::vector<double> centers_;
  std::vector<double> log_norm_;  // log of each kernel's mass inside [low_, high_]
};

/// Smoothed category frequencies: (count + prior) / (n + K * prior).
class CategoricalDensity {
 public:
  CategoricalDensity(std::size_t categories, std::span<const std::size_t> observations,
                     double prior);

  space::ParamValue sample(Rng &rng) const;
  double log_density(const space::ParamValue &value) const;
  const std::vector<double> &probabilities() const noexcept { return probs_; }

 private:
  std::vector<double> probs_;
};

/// Density of one parameter fitted to a set of configurations.
class ParamDensity {
 public:
  explicit ParamDensity(KernelMixture model) : model_(std::move(model)) {}
  explicit ParamDensity(CategoricalDensity model) : model_(std::move(model)) {}

  space::ParamValue sample(Rng &rng) const;
  double log_density(const space::ParamValue &value) const;
  const std::variant<KernelMixture, CategoricalDensity> &model() const noexcept { return model_; }

 private:
  std::variant<KernelMixture, CategoricalDensity> model_;
};

/// Fits the density of `param` to its values in `configs` (possibly empty).
ParamDensity parzen_fit(std::span<const space::HPConfig *const> configs,
                        const space::ParamSpec &param, const TpeSettings &settings);

/// Product of independent per-parameter densities over a whole space.
class ConfigDensity {
 public:
  ConfigDensity(const space::SearchSpace &space, std::span<const space::HPConfig *const> configs,
                const TpeSettings &settings);

  space::HPConfig sample(const space::SearchSpace &space, Rng &rng) const;
  double log_density(const space::SearchSpace &space, const space::HPConfig &config) const;

 private:
  std::vector<ParamDensity> params_;
};

}  // namespace mohpo::sampling
