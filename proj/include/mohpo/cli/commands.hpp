#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mohpo/cli/config.hpp"

namespace mohpo::cli {

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

/// Environment variable naming the default output directory.
inline constexpr const char *kOutDirEnv = "MOHPO_OUT_DIR";

struct StudyOptions {
  std::filesystem::path config;
  std::vector<Override> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> parallel;
  std::optional<std::string> stage_budgets;  // "50,50,50"
  std::optional<std::filesystem::path> out_dir;
};

/// Overrides with --seed, --parallel and --stage-budgets folded in.
std::vector<Override> effective_overrides(const StudyOptions &options);

/// --out-dir, then output.dir of the config, then the environment variable,
/// then `fallback`.
std::filesystem::path resolve_out_dir(const std::optional<std::filesystem::path> &flag,
                                      const std::optional<std::filesystem::path> &configured,
                                      const std::filesystem::path &fallback);

int cmd_run(const StudyOptions &options, std::ostream &out, std::ostream &err);

int cmd_datagen(const std::optional<std::filesystem::path> &spec_path,
                const std::optional<std::filesystem::path> &out_dir,
                const std::vector<Override> &overrides, std::optional<std::uint64_t> seed,
                std::ostream &out, std::ostream &err);

/// Per-stage best scores, Pareto size, vote tally, winner and the
/// objectives x metrics grid of the winner on the meta split.
void render_report_text(const nlohmann::ordered_json &report, std::ostream &out);
/// One row per (stage, criterion).
void render_report_csv(const nlohmann::ordered_json &report, std::ostream &out);

/// format: text | csv
int cmd_report(const std::filesystem::path &report_path, const std::string &format,
               std::ostream &out, std::ostream &err);

/// Re-runs meta evaluation and voting for one stage of an existing report.
int cmd_vote(const StudyOptions &options, const std::filesystem::path &report_path,
             std::optional<int> stage, std::optional<std::size_t> top_n, std::ostream &out,
             std::ostream &err);

int cmd_oracle(const StudyOptions &options, std::size_t resolution, std::size_t cap,
               std::ostream &out, std::ostream &err);

}  // namespace mohpo::cli
