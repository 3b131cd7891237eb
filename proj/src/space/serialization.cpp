#include "mohpo/space/serialization.hpp"

#include <ostream>

#include "mohpo/common/errors.hpp"

namespace mohpo::space {

namespace {

ordered_json literal_to_json(const Literal &literal) {
  if (const double *d = std::get_if<double>(&literal)) return *d;
  return std::get<std::string>(literal);
}

Literal literal_from_json(const ordered_json &json) {
  if (json.is_number()) return json.get<double>();
  if (json.is_string()) return json.get<std::string>();
  throw DataError("list values must be numbers or strings");
}

std::vector<Literal> literals_from_json(const ordered_json &json) {
  std::vector<Literal> out;
  for (const auto &v : json) out.push_back(literal_from_json(v));
  return out;
}

ordered_json literals_to_json(const std::vector<Literal> &values) {
  ordered_json out = ordered_json::array();
  for (const auto &v : values) out.push_back(literal_to_json(v));
  return out;
}

}  // namespace

ordered_json value_to_json(const ParamSpec &spec, const ParamValue &value) {
  if (const double *d = std::get_if<double>(&value)) return *d;
  if (const std::int64_t *i = std::get_if<std::int64_t>(&value)) return *i;
  return literal_to_json(list_values(spec).at(std::get<ChoiceIndex>(value).index));
}

ParamValue value_from_json(const ParamSpec &spec, const ordered_json &json) {
  if (std::holds_alternative<ContinuousRange>(spec.domain)) {
    if (!json.is_number()) throw DataError("param '" + spec.name + "': expected a number");
    return json.get<double>();
  }
  if (std::holds_alternative<IntegerRange>(spec.domain)) {
    if (!json.is_number_integer()) {
      throw DataError("param '" + spec.name + "': expected an integer");
    }
    return json.get<std::int64_t>();
  }
  const Literal wanted = literal_from_json(json);
  const auto &values = list_values(spec);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == wanted) return ChoiceIndex{i};
  }
  throw DataError("param '" + spec.name + "': value " + json.dump() + " is not declared");
}

ordered_json config_to_json(const SearchSpace &space, const HPConfig &config) {
  ordered_json out = ordered_json::object();
  for (const auto &p : space.params()) out[p.name] = value_to_json(p, config.at(p.name));
  return out;
}

HPConfig config_from_json(const SearchSpace &space, const ordered_json &json) {
  if (!json.is_object()) throw DataError("config must be a JSON object");
  HPConfig config;
  for (const auto &p : space.params()) {
    if (!json.contains(p.name)) throw DataError("config lacks param '" + p.name + "'");
    config.set(p.name, value_from_json(p, json.at(p.name)));
  }
  return config;
}

ordered_json trial_to_json(const SearchSpace &space, const Trial &trial) {
  ordered_json out;
  out["id"] = trial.id;
  out["stage"] = trial.stage;
  out["config"] = config_to_json(space, trial.config);
  out["objective_values"] = trial.objective_values;
  out["provenance"] = to_string(trial.provenance);
  return out;
}

Trial trial_from_json(const SearchSpace &space, const ordered_json &json) {
  Trial trial;
  try {
    trial.id = json.at("id").get<std::uint64_t>();
    trial.stage = json.at("stage").get<int>();
    trial.config = config_from_json(space, json.at("config"));
    trial.objective_values = json.at("objective_values").get<std::vector<double>>();
    trial.provenance = parse_provenance(json.at("provenance").get<std::string>());
  } catch (const nlohmann::json::exception &e) {
    throw DataError(std::string("malformed trial: ") + e.what());
  }
  return trial;
}

void write_trials_jsonl(std::ostream &out, const SearchSpace &space,
                        const ObservationDataset &dataset) {
  for (const auto &t : dataset) out << trial_to_json(space, t).dump() << '\n';
}

ordered_json space_to_json(const SearchSpace &space) {
  ordered_json out = ordered_json::array();
  for (const auto &p : space.params()) {
    ordered_json j;
    j["name"] = p.name;
    if (const auto *r = std::get_if<ContinuousRange>(&p.domain)) {
      j["type"] = "continuous";
      j["low"] = r->low;
      j["high"] = r->high;
      j["scale"] = r->scale == Scale::log ? "log" : "linear";
    } else if (const auto *r = std::get_if<IntegerRange>(&p.domain)) {
      j["type"] = "integer";
      j["low"] = r->low;
      j["high"] = r->high;
      j["scale"] = r->scale == Scale::log ? "log" : "linear";
    } else if (const auto *c = std::get_if<CategoricalChoices>(&p.domain)) {
      j["type"] = "categorical";
      j["choices"] = literals_to_json(c->choices);
    } else {
      j["type"] = "grid";
      j["points"] = literals_to_json(std::get<GridPoints>(p.domain).points);
    }
    out.push_back(std::move(j));
  }
  return out;
}

SearchSpace space_from_json(const ordered_json &json) {
  std::vector<ParamSpec> params;
  try {
    for (const auto &j : json) {
      ParamSpec p;
      p.name = j.at("name").get<std::string>();
      const auto type = j.at("type").get<std::string>();
      auto scale = [&] {
        return j.value("scale", std::string("linear")) == "log" ? Scale::log : Scale::linear;
      };
      if (type == "continuous") {
        p.domain = ContinuousRange{j.at("low").get<double>(), j.at("high").get<double>(), scale()};
      } else if (type == "integer") {
        p.domain = IntegerRange{j.at("low").get<std::int64_t>(), j.at("high").get<std::int64_t>(),
                                scale()};
      } else if (type == "categorical") {
        p.domain = CategoricalChoices{literals_from_json(j.at("choices"))};
      } else if (type == "grid") {
        p.domain = GridPoints{literals_from_json(j.at("points"))};
      } else {
        throw DataError("unknown param type '" + type + "'");
      }
      params.push_back(std::move(p));
    }
  } catch (const nlohmann::json::exception &e) {
    throw DataError(std::string("malformed search space: ") + e.what());
  }
  return SearchSpace(std::move(params));
}

}  // namespace mohpo::space
