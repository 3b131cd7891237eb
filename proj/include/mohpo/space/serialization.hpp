#pragma once

#include <iosfwd>
#include <nlohmann/json.hpp>

#include "mohpo/space/search_space.hpp"
#include "mohpo/space/trial.hpp"

namespace mohpo::space {

using ordered_json = nlohmann::ordered_json;

ordered_json value_to_json(const ParamSpec &spec, const ParamValue &value);
ParamValue value_from_json(const ParamSpec &spec, const ordered_json &json);

/// Config as an object keyed by parameter name, in space declaration order.
ordered_json config_to_json(const SearchSpace &space, const HPConfig &config);
HPConfig config_from_json(const SearchSpace &space, const ordered_json &json);

/// Trial with the fixed field order id, stage, config, objective_values,
/// provenance.
ordered_json trial_to_json(const SearchSpace &space, const Trial &trial);
Trial trial_from_json(const SearchSpace &space, const ordered_json &json);

/// One trial per line.
void write_trials_jsonl(std::ostream &out, const SearchSpace &space,
                        const ObservationDataset &dataset);

ordered_json space_to_json(const SearchSpace &space);
SearchSpace space_from_json(const ordered_json &json);

}  // namespace mohpo::space
