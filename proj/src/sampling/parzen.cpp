#include "mohpo/sampling/parzen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/special_functions/erf.hpp>

namespace mohpo::sampling {

namespace {

constexpr double kTiny = 1e-300;
const double kSqrt2 = std::sqrt(2.0);
const double kLogSqrt2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

// Mass of the standard normal between za <= zb, computed on the tail that
// avoids cancellation.
double normal_interval_mass(double za, double zb) {
  if (za >= 0.0) return 0.5 * (std::erfc(za / kSqrt2) - std::erfc(zb / kSqrt2));
  if (zb <= 0.0) return 0.5 * (std::erfc(-zb / kSqrt2) - std::erfc(-za / kSqrt2));
  return 1.0 - 0.5 * std::erfc(-za / kSqrt2) - 0.5 * std::erfc(zb / kSqrt2);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / kSqrt2); }

double normal_quantile(double p) {
  p = std::clamp(p, kTiny, 1.0 - 1e-16);
  return -kSqrt2 * boost::math::erfc_inv(2.0 * p);
}

double log_sum_exp(const std::vector<double> &terms) {
  const double top = *std::max_element(terms.begin(), terms.end());
  if (!std::isfinite(top)) return top;
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - top);
  return top + std::log(sum);
}

}  // namespace

void validate(const TpeSettings &s) {
  if (!(s.gamma_quantile > 0.0 && s.gamma_quantile < 1.0)) {
    throw std::invalid_argument("tpe gamma quantile must lie in (0, 1)");
  }
  if (s.n_startup < 1) throw std::invalid_argument("tpe n_startup must be >= 1");
  if (s.n_candidates < 1) throw std::invalid_argument("tpe n_candidates must be >= 1");
  if (!(s.bandwidth_floor > 0.0)) throw std::invalid_argument("tpe bandwidth_floor must be > 0");
  if (!(s.categorical_prior > 0.0)) {
    throw std::invalid_argument("tpe categorical_prior must be > 0");
  }
}

KernelMixture::KernelMixture(const space::ParamSpec &spec, std::span<const double> observations,
                             const TpeSettings &settings) {
  auto to_scale = [&](double x) { return log_scale_ ? std::log(x) : x; };
  if (const auto *r = std::get_if<space::ContinuousRange>(&spec.domain)) {
    log_scale_ = r->scale == space::Scale::log;
    value_low_ = r->low;
    value_high_ = r->high;
    low_ = to_scale(r->low);
    high_ = to_scale(r->high);
  } else if (const auto *r = std::get_if<space::IntegerRange>(&spec.domain)) {
    integer_ = true;
    log_scale_ = r->scale == space::Scale::log;
    int_low_ = r->low;
    int_high_ = r->high;
    value_low_ = static_cast<double>(r->low);
    value_high_ = static_cast<double>(r->high);
    low_ = to_scale(value_low_ - 0.5);
    high_ = to_scale(value_high_ + 0.5);
  } else {
    throw std::invalid_argument("KernelMixture requires a numeric parameter");
  }

  const double range = high_ - low_;
  centers_.reserve(observations.size());
  for (double x : observations) centers_.push_back(std::clamp(to_scale(x), low_, high_));
  const double count = static_cast<double>(std::max<std::size_t>(1, centers_.size()));
  bandwidth_ = std::max(settings.bandwidth_floor * range, range / count);
  log_norm_.reserve(centers_.size());
  for (double c : centers_) {
    const double mass = normal_interval_mass((low_ - c) / bandwidth_, (high_ - c) / bandwidth_);
    log_norm_.push_back(std::log(std::max(mass, kTiny)));
  }
}

double KernelMixture::kernel_mass(std::size_t i, double a, double b) const {
  const double c = centers_[i];
  return normal_interval_mass((a - c) / bandwidth_, (b - c) / bandwidth_) / std::exp(log_norm_[i]);
}

space::ParamValue KernelMixture::sample(Rng &rng) const {
  double s;
  if (centers_.empty()) {
    s = rng.uniform(low_, high_);
  } else {
    const double c = centers_[rng.below(centers_.size())];
    const double lo = normal_cdf((low_ - c) / bandwidth_);
    const double hi = normal_cdf((high_ - c) / bandwidth_);
    s = c + bandwidth_ * normal_quantile(rng.uniform(lo, hi));
  }
  s = std::clamp(s, low_, high_);
  const double x = log_scale_ ? std::exp(s) : s;
  if (integer_) {
    return std::clamp(static_cast<std::int64_t>(std::llround(x)), int_low_, int_high_);
  }
  return std::clamp(x, value_low_, value_high_);
}

double KernelMixture::log_density(const space::ParamValue &value) const {
  auto to_scale = [&](double x) { return log_scale_ ? std::log(x) : x; };
  if (integer_) {
    const double k = static_cast<double>(std::get<std::int64_t>(value));
    const double a = std::max(low_, to_scale(k - 0.5));
    const double b = std::min(high_, to_scale(k + 0.5));
    if (centers_.empty()) return std::log(std::max((b - a) / (high_ - low_), kTiny));
    double mass = 0.0;
    for (std::size_t i = 0; i < centers_.size(); ++i) mass += kernel_mass(i, a, b);
    return std::log(std::max(mass / static_cast<double>(centers_.size()), kTiny));
  }

  const double x = std::get<double>(value);
  const double s = to_scale(x);
  const double jacobian = log_scale_ ? -std::log(x) : 0.0;
  if (centers_.empty()) return -std::log(high_ - low_) + jacobian;
  std::vector<double> terms(centers_.size());
  const double log_sigma = std::log(bandwidth_);
  for (std::size_t i = 0; i < centers_.size(); ++i) {
    const double z = (s - centers_[i]) / bandwidth_;
    terms[i] = -0.5 * z * z - kLogSqrt2Pi - log_sigma - log_norm_[i];
  }
  return log_sum_exp(terms) - std::log(static_cast<double>(centers_.size())) + jacobian;
}

CategoricalDensity::CategoricalDensity(std::size_t categories,
                                       std::span<const std::size_t> observations, double prior)
    : probs_(categories, prior) {
  for (std::size_t idx : observations) probs_.at(idx) += 1.0;
  const double total = static_cast<double>(observations.size()) +
                       static_cast<double>(categories) * prior;
  for (double &p : probs_) p /= total;
}

space::ParamValue CategoricalDensity::sample(Rng &rng) const {
  const double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    acc += probs_[i];
    if (u < acc) return space::ChoiceIndex{i};
  }
  return space::ChoiceIndex{probs_.size() - 1};
}

double CategoricalDensity::log_density(const space::ParamValue &value) const {
  return std::log(probs_.at(std::get<space::ChoiceIndex>(value).index));
}

space::ParamValue ParamDensity::sample(Rng &rng) const {
  return std::visit([&](const auto &m) { return m.sample(rng); }, model_);
}

double ParamDensity::log_density(const space::ParamValue &value) const {
  return std::visit([&](const auto &m) { return m.log_density(value); }, model_);
}

ParamDensity parzen_fit(std::span<const space::HPConfig *const> configs,
                        const space::ParamSpec &param, const TpeSettings &settings) {
  if (space::is_list_domain(param)) {
    std::vector<std::size_t> observed;
    observed.reserve(configs.size());
    for (const auto *c : configs) {
      observed.push_back(std::get<space::ChoiceIndex>(c->at(param.name)).index);
    }
    return ParamDensity(
        CategoricalDensity(space::list_size(param), observed, settings.categorical_prior));
  }
  std::vector<double> observed;
  observed.reserve(configs.size());
  for (const auto *c : configs) observed.push_back(space::numeric_value(param, c->at(param.name)));
  return ParamDensity(KernelMixture(param, observed, settings));
}

ConfigDensity::ConfigDensity(const space::SearchSpace &space,
                             std::span<const space::HPConfig *const> configs,
                             const TpeSettings &settings) {
  params_.reserve(space.size());
  for (const auto &p : space.params()) params_.push_back(parzen_fit(configs, p, settings));
}

space::HPConfig ConfigDensity::sample(const space::SearchSpace &space, Rng &rng) const {
  space::HPConfig config;
  for (std::size_t i = 0; i < params_.size(); ++i) {
    config.set(space.params()[i].name, params_[i].sample(rng));
  }
  return config;
}

double ConfigDensity::log_density(const space::SearchSpace &space,
                                  const space::HPConfig &config) const {
  double total = 0.0;
  for (std::size_t i = 0; i < params_.size(); ++i) {
    total += params_[i].log_density(config.at(space.params()[i].name));
  }
  return total;
}

}  // namespace mohpo::sampling
