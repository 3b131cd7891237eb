#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mohpo::space {

enum class Scale { linear, log };

struct ContinuousRange {
  double low = 0.0;
  double high = 1.0;
  Scale scale = Scale::linear;
};

struct IntegerRange {
  std::int64_t low = 0;
  std::int64_t high = 1;
  Scale scale = Scale::linear;
};

/// A declared categorical/grid value: either a number or a label.
using Literal = std::variant<double, std::string>;

struct CategoricalChoices {
  std::vector<Literal> choices;
};

struct GridPoints {
  std::vector<Literal> points;
};

using Domain = std::variant<ContinuousRange, IntegerRange, CategoricalChoices, GridPoints>;

struct ParamSpec {
  std::string name;
  Domain domain;
};

/// Index into a categorical choice list or a grid point list.
struct ChoiceIndex {
  std::size_t index = 0;
  auto operator<=>(const ChoiceIndex &) const = default;
};

/// Continuous values are doubles, integer ranges exact integers, and list
/// domains (categorical and grid) are stored by index.
using ParamValue = std::variant<double, std::int64_t, ChoiceIndex>;

bool is_list_domain(const ParamSpec &spec);
/// Number of declared values of a categorical or grid parameter.
std::size_t list_size(const ParamSpec &spec);
const std::vector<Literal> &list_values(const ParamSpec &spec);

std::string literal_to_string(const Literal &literal);

class SearchSpace {
 public:
  SearchSpace() = default;
  explicit SearchSpace(std::vector<ParamSpec> params) : params_(std::move(params)) {}

  const std::vector<ParamSpec> &params() const noexcept { return params_; }
  std::size_t size() const noexcept { return params_.size(); }
  const ParamSpec *find(std::string_view name) const;
  std::optional<std::size_t> index_of(std::string_view name) const;

 private:
  std::vector<ParamSpec> params_;
};

class HPConfig {
 public:
  struct Assignment {
    std::string name;
    ParamValue value;
    bool operator==(const Assignment &) const = default;
  };

  /// Appends, or replaces an existing assignment with the same name.
  void set(std::string name, ParamValue value);
  const ParamValue *find(std::string_view name) const;
  const ParamValue &at(std::string_view name) const;
  const std::vector<Assignment> &assignments() const noexcept { return assignments_; }
  std::size_t size() const noexcept { return assignments_.size(); }

  bool operator==(const HPConfig &) const = default;

 private:
  std::vector<Assignment> assignments_;
};

struct ValidationReport {
  std::vector<std::string> errors;
  bool ok() const noexcept { return errors.empty(); }
};

/// Checks every ParamSpec invariant and reports all violations at once.
ValidationReport validate_space(const SearchSpace &space);

/// Checks that `config` assigns exactly one in-domain value to every parameter.
ValidationReport validate_config(const SearchSpace &space, const HPConfig &config);

bool value_in_domain(const ParamSpec &spec, const ParamValue &value);

/// Numeric reading of a parameter value: continuous/integer values as is,
/// list values through their declared literal. Throws ConfigError for labels.
double numeric_value(const ParamSpec &spec, const ParamValue &value);

/// Human-readable rendering ("0.25", "42", "minmax").
std::string format_value(const ParamSpec &spec, const ParamValue &value);

}  // namespace mohpo::space
