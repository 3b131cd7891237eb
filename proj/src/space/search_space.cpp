#include "mohpo/space/search_space.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "mohpo/common/errors.hpp"

namespace mohpo::space {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string format_number(double x) {
  std::ostringstream out;
  out.precision(17);
  out << x;
  return out.str();
}

void check_list(const std::string &name, const char *kind,
                const std::vector<Literal> &values, std::vector<std::string> &errors) {
  if (values.empty()) {
    errors.push_back("param '" + name + "': " + kind + " list must be non-empty");
    return;
  }
  std::set<Literal> seen;
  for (const auto &v : values) {
    if (const double *d = std::get_if<double>(&v); d && !std::isfinite(*d)) {
      errors.push_back("param '" + name + "': " + kind + " values must be finite");
    }
    if (!seen.insert(v).second) {
      errors.push_back("param '" + name + "': duplicate " + kind + " value '" +
                       literal_to_string(v) + "'");
    }
  }
}

}  // namespace

bool is_list_domain(const ParamSpec &spec) {
  return std::holds_alternative<CategoricalChoices>(spec.domain) ||
         std::holds_alternative<GridPoints>(spec.domain);
}

const std::vector<Literal> &list_values(const ParamSpec &spec) {
  if (const auto *c = std::get_if<CategoricalChoices>(&spec.domain)) return c->choices;
  if (const auto *g = std::get_if<GridPoints>(&spec.domain)) return g->points;
  throw ConfigError("param '" + spec.name + "' is not a categorical or grid parameter");
}

std::size_t list_size(const ParamSpec &spec) { return list_values(spec).size(); }

std::string literal_to_string(const Literal &literal) {
  return std::visit(overloaded{[](double d) { return format_number(d); },
                               [](const std::string &s) { return s; }},
                    literal);
}

const ParamSpec *SearchSpace::find(std::string_view name) const {
  auto it = std::find_if(params_.begin(), params_.end(),
                         [&](const ParamSpec &p) { return p.name == name; });
  return it == params_.end() ? nullptr : &*it;
}

std::optional<std::size_t> SearchSpace::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (params_[i].name == name) return i;
  }
  return std::nullopt;
}

void HPConfig::set(std::string name, ParamValue value) {
  for (auto &a : assignments_) {
    if (a.name == name) {
      a.value = value;
      return;
    }
  }
  assignments_.push_back({std::move(name), value});
}

const ParamValue *HPConfig::find(std::string_view name) const {
  for (const auto &a : assignments_) {
    if (a.name == name) return &a.value;
  }
  return nullptr;
}

const ParamValue &HPConfig::at(std::string_view name) const {
  if (const auto *v = find(name)) return *v;
  throw ConfigError("config has no assignment for param '" + std::string(name) + "'");
}

ValidationReport validate_space(const SearchSpace &space) {
  ValidationReport report;
  if (space.params().empty()) report.errors.push_back("search space has no parameters");
  std::set<std::string> names;
  for (const auto &p : space.params()) {
    if (p.name.empty()) report.errors.push_back("parameter with empty name");
    if (!names.insert(p.name).second) {
      report.errors.push_back("param '" + p.name + "': duplicate name");
    }
    std::visit(
        overloaded{
            [&](const ContinuousRange &r) {
              if (!std::isfinite(r.low) || !std::isfinite(r.high)) {
                report.errors.push_back("param '" + p.name + "': bounds must be finite");
              } else if (!(r.low < r.high)) {
                report.errors.push_back("param '" + p.name + "': lo < hi violated");
              }
              if (r.scale == Scale::log && !(r.low > 0.0)) {
                report.errors.push_back("param '" + p.name + "': log scale requires lo > 0");
              }
            },
            [&](const IntegerRange &r) {
              if (!(r.low < r.high)) {
                report.errors.push_back("param '" + p.name + "': lo < hi violated");
              }
              if (r.scale == Scale::log && r.low <= 0) {
                report.errors.push_back("param '" + p.name + "': log scale requires lo > 0");
              }
            },
            [&](const CategoricalChoices &c) {
              check_list(p.name, "categorical", c.choices, report.errors);
            },
            [&](const GridPoints &g) { check_list(p.name, "grid", g.points, report.errors); },
        },
        p.domain);
  }
  return report;
}

bool value_in_domain(const ParamSpec &spec, const ParamValue &value) {
  return std::visit(
      overloaded{
          [&](const ContinuousRange &r) {
            const double *d = std::get_if<double>(&value);
            return d && std::isfinite(*d) && *d >= r.low && *d <= r.high;
          },
          [&](const IntegerRange &r) {
            const std::int64_t *i = std::get_if<std::int64_t>(&value);
            return i && *i >= r.low && *i <= r.high;
          },
          [&](const CategoricalChoices &c) {
            const ChoiceIndex *i = std::get_if<ChoiceIndex>(&value);
            return i && i->index < c.choices.size();
          },
          [&](const GridPoints &g) {
            const ChoiceIndex *i = std::get_if<ChoiceIndex>(&value);
            return i && i->index < g.points.size();
          },
      },
      spec.domain);
}

ValidationReport validate_config(const SearchSpace &space, const HPConfig &config) {
  ValidationReport report;
  for (const auto &p : space.params()) {
    const ParamValue *v = config.find(p.name);
    if (!v) {
      report.errors.push_back("param '" + p.name + "': missing assignment");
    } else if (!value_in_domain(p, *v)) {
      report.errors.push_back("param '" + p.name + "': value outside domain");
    }
  }
  for (const auto &a : config.assignments()) {
    if (!space.find(a.name)) {
      report.errors.push_back("param '" + a.name + "': not declared in the space");
    }
  }
  return report;
}

double numeric_value(const ParamSpec &spec, const ParamValue &value) {
  if (const double *d = std::get_if<double>(&value)) return *d;
  if (const std::int64_t *i = std::get_if<std::int64_t>(&value)) return static_cast<double>(*i);
  const auto &values = list_values(spec);
  const std::size_t idx = std::get<ChoiceIndex>(value).index;
  if (idx >= values.size()) {
    throw ConfigError("param '" + spec.name + "': choice index out of range");
  }
  if (const double *d = std::get_if<double>(&values[idx])) return *d;
  throw ConfigError("param '" + spec.name + "': value '" +
                    std::get<std::string>(values[idx]) + "' is not numeric");
}

std::string format_value(const ParamSpec &spec, const ParamValue &value) {
  if (const double *d = std::get_if<double>(&value)) return format_number(*d);
  if (const std::int64_t *i = std::get_if<std::int64_t>(&value)) return std::to_string(*i);
  const auto &values = list_values(spec);
  const std::size_t idx = std::get<ChoiceIndex>(value).index;
  return idx < values.size() ? literal_to_string(values[idx]) : "<invalid>";
}

}  // namespace mohpo::space
