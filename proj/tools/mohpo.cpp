#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mohpo/cli/commands.hpp"
#include "mohpo/common/errors.hpp"

using namespace mohpo::cli;

namespace {

struct StudyFlags {
  std::string config;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> parallel;
  std::optional<std::string> stage_budgets;
  std::optional<std::string> out_dir;

  void attach(CLI::App *cmd, bool with_out_dir) {
    cmd->add_option("-c,--config", config, "Study config (YAML)")->required();
    cmd->add_option("--override", overrides, "key=value, repeatable (dotted keys)");
    cmd->add_option("--seed", seed, "Override the study seed");
    cmd->add_option("--parallel", parallel, "Worker threads (0 = all cores)");
    cmd->add_option("--stage-budgets", stage_budgets, "Comma-separated trial budgets per stage");
    if (with_out_dir) cmd->add_option("-o,--out-dir", out_dir, "Output directory");
  }

  StudyOptions options() const {
    StudyOptions o;
    o.config = config;
    for (const auto &text : overrides) o.overrides.push_back(parse_override(text));
    o.seed = seed;
    o.parallel = parallel;
    o.stage_budgets = stage_budgets;
    if (out_dir) o.out_dir = *out_dir;
    return o;
  }
};

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Multi-objective hyperparameter optimization for retrieval"};
  app.require_subcommand(1);

  StudyFlags run_flags;
  auto *run = app.add_subcommand("run", "Run a (multi-stage) study and write its report");
  run_flags.attach(run, true);

  std::optional<std::string> spec_path, data_out;
  std::vector<std::string> data_overrides;
  std::optional<std::uint64_t> data_seed;
  auto *datagen = app.add_subcommand("datagen", "Generate a synthetic corpus, queries and logs");
  datagen->add_option("-s,--spec", spec_path, "Generator spec (YAML); defaults if omitted");
  datagen->add_option("-o,--out-dir", data_out, "Output directory");
  datagen->add_option("--override", data_overrides, "key=value, repeatable");
  datagen->add_option("--seed", data_seed, "Override the generator seed");

  std::string report_path, format = "text";
  auto *report = app.add_subcommand("report", "Render a study report");
  report->add_option("report", report_path, "report.json written by run")->required();
  report->add_option("-f,--format", format, "text or csv");

  StudyFlags vote_flags;
  std::string vote_report;
  std::optional<int> vote_stage;
  std::optional<std::size_t> vote_top_n;
  auto *vote = app.add_subcommand("vote", "Re-run meta evaluation and voting on a report");
  vote_flags.attach(vote, false);
  vote->add_option("-r,--report", vote_report, "report.json written by run")->required();
  vote->add_option("--stage", vote_stage, "Stage index (default: last)");
  vote->add_option("--top-n", vote_top_n, "Top-n per criterion");

  StudyFlags oracle_flags;
  std::size_t resolution = 9, cap = 100000;
  auto *oracle = app.add_subcommand("oracle", "Exhaustive grid search over the study space");
  oracle_flags.attach(oracle, false);
  oracle->add_option("--resolution", resolution, "Grid points per numeric parameter");
  oracle->add_option("--cap", cap, "Refuse grids with more configurations than this");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) return cmd_run(run_flags.options(), std::cout, std::cerr);
    if (*datagen) {
      std::vector<Override> overrides;
      for (const auto &text : data_overrides) overrides.push_back(parse_override(text));
      std::optional<std::filesystem::path> out;
      if (data_out) out = *data_out;
      std::optional<std::filesystem::path> spec;
      if (spec_path) spec = *spec_path;
      return cmd_datagen(spec, out, overrides, data_seed, std::cout, std::cerr);
    }
    if (*report) return cmd_report(report_path, format, std::cout, std::cerr);
    if (*vote) {
      return cmd_vote(vote_flags.options(), vote_report, vote_stage, vote_top_n, std::cout,
                      std::cerr);
    }
    if (*oracle) return cmd_oracle(oracle_flags.options(), resolution, cap, std::cout, std::cerr);
  } catch (const mohpo::ConfigError &e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
