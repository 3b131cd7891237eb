#pragma once

#include <span>
#include <vector>

#include "mohpo/sampling/parzen.hpp"
#include "mohpo/sampling/sampler.hpp"

namespace mohpo::sampling {

struct ObjectiveMode {
  enum class Kind { separate, weighted_sum };
  Kind kind = Kind::separate;
  /// Non-negative, summing to 1; only used in weighted-sum mode.
  std::vector<double> weights;

  static ObjectiveMode separate() { return {}; }
  static ObjectiveMode weighted_sum(std::vector<double> w) {
    return {Kind::weighted_sum, std::move(w)};
  }
};

struct QuantileSplit {
  double gamma = 0.0;
  std::vector<std::size_t> good;
  std::vector<std::size_t> bad;
};

/// Linear-interpolation quantile of ascending-sorted values at q in [0, 1].
double sorted_quantile(std::span<const double> sorted, double q);

/// Splits observations of one objective at the v-quantile of the values in
/// minimization orientation. `good` holds the indices at or below gamma and is
/// never empty; `bad` is the complement. Both are in ascending index order.
QuantileSplit tpe_split(std::span<const double> values, double quantile,
                        space::Direction direction);

/// Σ w_m z_m with each z_m oriented so that larger is better. This is the
/// reported weighted score; samplers minimize its negation.
/// Throws std::invalid_argument on length mismatch or unnormalized weights.
double weighted_sum_reduce(std::span<const double> values, std::span<const double> weights,
                           std::span<const space::Direction> directions);

/// Sum over objectives of log l_m - log g_m (the log of the EI product).
double log_ei(std::span<const double> log_ratios);

/// Index of the largest score; the lowest index wins ties.
std::size_t argmax_lowest(std::span<const double> scores);

/// One TPE proposal. Uniform until the dataset holds n_startup observations.
space::HPConfig tpe_next(const space::SearchSpace &space, const space::ObservationDataset &dataset,
                         std::span<const space::Direction> directions, const ObjectiveMode &mode,
                         const TpeSettings &settings, Rng &rng);

class TpeSampler final : public Sampler {
 public:
  TpeSampler(ObjectiveMode mode, TpeSettings settings);

  std::string_view name() const override { return "tpe"; }
  std::optional<space::HPConfig> next(const space::SearchSpace &space,
                                      const space::ObservationDataset &dataset,
                                      std::span<const space::Direction> directions,
                                      Rng &rng) const override;
  nlohmann::ordered_json settings() const override;

  const ObjectiveMode &mode() const noexcept { return mode_; }
  const TpeSettings &tpe_settings() const noexcept { return settings_; }

 private:
  ObjectiveMode mode_;
  TpeSettings settings_;
};

}  // namespace mohpo::sampling
