#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mohpo/datagen/generator.hpp"
#include "mohpo/objectives/labels.hpp"
#include "mohpo/retrieval/transform.hpp"
#include "mohpo/sampling/parzen.hpp"
#include "mohpo/space/search_space.hpp"
#include "mohpo/study/pipeline.hpp"

namespace mohpo::cli {

struct DataPaths {
  std::filesystem::path corpus;
  std::filesystem::path queries;
  std::filesystem::path train_log;
  std::filesystem::path meta_log;
};

struct SamplerConfig {
  std::string name = "tpe";  // tpe | random | grid
  std::string mode = "separate";  // separate | weighted_sum
  sampling::TpeSettings tpe;
};

/// Everything a study needs, as declared in the YAML config file.
struct StudyConfig {
  std::uint64_t seed = 0;
  unsigned parallelism = 0;  // 0 = available cores
  DataPaths data;
  space::SearchSpace space;
  SamplerConfig sampler;
  std::vector<objectives::ObjectiveSpec> objectives;
  std::vector<double> weights;
  retrieval::TransformMapping transform;
  std::size_t top_n = 10;
  bool identity_split = false;
  std::vector<std::string> criteria;  // empty = every objective plus weighted_sum
  study::CumulativeSettings cumulative;
  /// Resolved against the config directory; empty when not declared.
  std::optional<std::filesystem::path> output_dir;
};

/// `key=value` with a dotted key path (list elements by index, e.g.
/// `objectives.0.min_impressions=5`). The value is read as YAML.
struct Override {
  std::string key;
  std::string value;
};

Override parse_override(const std::string &text);

/// Parses and validates a study config. Relative data paths resolve against
/// the config file's directory. Throws ConfigError listing every problem as
/// `file:line: key: message`.
StudyConfig load_study_config(const std::filesystem::path &path,
                              const std::vector<Override> &overrides = {});
StudyConfig parse_study_config(const std::string &text, const std::string &source_name,
                               const std::filesystem::path &base_dir,
                               const std::vector<Override> &overrides = {});

/// Loads the data files and wires evaluators and sampler. Throws ConfigError
/// for missing files or inconsistent declarations.
study::StudyDefinition build_study(const StudyConfig &config);

/// Generator spec from YAML; same error conventions as the study config.
datagen::GeneratorSpec load_generator_spec(const std::filesystem::path &path,
                                           const std::vector<Override> &overrides = {});
datagen::GeneratorSpec parse_generator_spec(const std::string &text,
                                            const std::string &source_name,
                                            const std::vector<Override> &overrides = {});

}  // namespace mohpo::cli
