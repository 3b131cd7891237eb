#include "mohpo/cli/commands.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "mohpo/common/errors.hpp"
#include "mohpo/datagen/oracle.hpp"
#include "mohpo/space/serialization.hpp"
#include "mohpo/study/report.hpp"

namespace mohpo::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

template <typename Fn>
int guarded(std::ostream &err, Fn &&fn) {
  try {
    return fn();
  } catch (const ConfigError &e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

std::string fixed(double x, int digits = 4) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << x;
  return s.str();
}

std::string number_or_dash(const ordered_json &j, int digits = 4) {
  return j.is_number() ? fixed(j.get<double>(), digits) : "-";
}

std::string config_line(const ordered_json &config) {
  std::string line;
  for (const auto &[name, value] : config.items()) {
    if (!line.empty()) line += ' ';
    line += name + '=' + (value.is_string() ? value.get<std::string>() : value.dump());
  }
  return line;
}

ordered_json load_report(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open report " + path.string());
  try {
    auto j = ordered_json::parse(in);
    if (!j.is_object() || !j.contains("stages") || !j["stages"].is_array() || j["stages"].empty() ||
        !j.contains("winner")) {
      throw DataError("report " + path.string() + " is missing stages or winner");
    }
    return j;
  } catch (const nlohmann::json::exception &e) {
    throw DataError("malformed report " + path.string() + ": " + e.what());
  }
}

void print_row(std::ostream &out, const std::vector<std::string> &cells,
               const std::vector<std::size_t> &widths) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    std::string cell = cells[i];
    if (cell.size() < widths[i]) cell.append(widths[i] - cell.size(), ' ');
    line += (i == 0 ? "" : "  ") + cell;
  }
  while (!line.empty() && line.back() == ' ') line.pop_back();
  out << line << '\n';
}

void print_table(std::ostream &out, const std::vector<std::vector<std::string>> &rows,
                 const std::string &indent) {
  if (rows.empty()) return;
  std::vector<std::size_t> widths(rows.front().size(), 0);
  for (const auto &r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) widths[i] = std::max(widths[i], r[i].size());
  }
  for (const auto &r : rows) {
    out << indent;
    print_row(out, r, widths);
  }
}

std::vector<std::vector<std::string>> tally_rows(const ordered_json &candidates,
                                                 const ordered_json &criteria) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"trial", "votes"};
  for (const auto &c : criteria) header.push_back(c.get<std::string>());
  header.push_back("meta_weighted");
  rows.push_back(header);
  for (const auto &c : candidates) {
    std::vector<std::string> row{std::to_string(c.at("trial_id").get<std::uint64_t>()),
                                 std::to_string(c.at("votes").get<std::size_t>())};
    for (const auto &name : criteria) {
      std::string cell = fixed(c.at("meta_criteria").at(name.get<std::string>()).get<double>());
      bool top = false;
      for (const auto &t : c.at("in_top")) top = top || t == name;
      row.push_back(cell + (top ? "*" : ""));
    }
    row.push_back(fixed(c.at("meta_weighted").get<double>()));
    rows.push_back(row);
  }
  return rows;
}

std::string winner_line(const ordered_json &report) {
  const auto &w = report.at("winner");
  return "winner: stage " + std::to_string(w.at("stage").get<int>()) + " trial " +
         std::to_string(w.at("trial_id").get<std::uint64_t>()) + " (meta weighted " +
         fixed(w.at("meta_weighted").get<double>()) + ") " + config_line(w.at("config"));
}

const ordered_json &find_candidate(const ordered_json &stage, std::uint64_t id) {
  for (const auto &c : stage.at("candidates")) {
    if (c.at("trial_id").get<std::uint64_t>() == id) return c;
  }
  throw DataError("winner trial " + std::to_string(id) + " is not among the stage candidates");
}

std::vector<std::size_t> parse_budgets(const std::string &text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ',');) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(part, &used);
      if (used != part.size() || v < 1) throw std::invalid_argument(part);
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception &) {
      throw ConfigError("--stage-budgets: '" + part + "' is not a positive integer");
    }
  }
  if (out.empty()) throw ConfigError("--stage-budgets: expected a comma-separated list");
  return out;
}

}  // namespace

std::vector<Override> effective_overrides(const StudyOptions &options) {
  auto overrides = options.overrides;
  if (options.seed) overrides.push_back({"seed", std::to_string(*options.seed)});
  if (options.parallel) overrides.push_back({"parallelism", std::to_string(*options.parallel)});
  if (options.stage_budgets) {
    std::string list = "[";
    for (std::size_t b : parse_budgets(*options.stage_budgets)) {
      list += (list.size() > 1 ? "," : "") + std::to_string(b);
    }
    overrides.push_back({"cumulative.stages", list + "]"});
  }
  return overrides;
}

std::filesystem::path resolve_out_dir(const std::optional<std::filesystem::path> &flag,
                                      const std::optional<std::filesystem::path> &configured,
                                      const std::filesystem::path &fallback) {
  if (flag) return *flag;
  if (configured) return *configured;
  if (const char *env = std::getenv(kOutDirEnv); env && *env) return env;
  return fallback;
}

void render_report_text(const ordered_json &report, std::ostream &out) {
  const auto &objectives = report.at("objectives");
  const auto &criteria = report.at("criteria");
  out << "sampler " << report.at("sampler").at("name").get<std::string>() << ", seed "
      << report.at("seed").get<std::uint64_t>() << ", objectives";
  for (std::size_t m = 0; m < objectives.size(); ++m) {
    out << (m ? ", " : " ") << objectives[m].at("name").get<std::string>() << " (w="
        << fixed(report.at("weights")[m].get<double>(), 3) << ")";
  }
  out << '\n';
  for (const auto &stage : report.at("stages")) {
    out << "\nstage " << stage.at("stage").get<int>() << ": " << stage.at("n_trials").get<std::size_t>()
        << " trials (" << stage.at("n_seeded").get<std::size_t>() << " seeded), best weighted "
        << fixed(stage.at("best_weighted").at("value").get<double>()) << " (trial "
        << stage.at("best_weighted").at("trial_id").get<std::uint64_t>() << "), pareto front "
        << stage.at("pareto_ids").size() << '\n';
    for (const auto &b : stage.at("best_per_objective")) {
      out << "  best " << b.at("objective").get<std::string>() << ' '
          << fixed(b.at("value").get<double>()) << " (trial "
          << b.at("trial_id").get<std::uint64_t>() << ")\n";
    }
    if (!stage.at("seeding").is_null()) {
      const auto &s = stage.at("seeding");
      out << "  seeded " << s.at("seeded").get<std::size_t>() << " (" << s.at("passed_filter").get<std::size_t>()
          << " passed the filter" << (s.at("fallback").get<bool>() ? ", fallback to the best trial" : "")
          << ")\n";
    }
    out << "  vote tally on the meta split (* = in that criterion's top-" << report.at("top_n").get<std::size_t>()
        << "):\n";
    print_table(out, tally_rows(stage.at("candidates"), criteria), "    ");
    const auto &w = stage.at("winner");
    out << "  stage winner: trial " << w.at("trial_id").get<std::uint64_t>() << " ("
        << w.at("votes").get<std::size_t>() << " votes, meta weighted "
        << fixed(w.at("meta_weighted").get<double>()) << ")\n";
  }

  const auto &last = report.at("stages").back();
  const auto &winner = find_candidate(last, report.at("winner").at("trial_id").get<std::uint64_t>());
  out << "\nmeta metrics of the winner:\n";
  std::vector<std::vector<std::string>> grid;
  std::vector<std::string> header{"objective"};
  std::vector<std::string> metric_names;
  for (const auto &o : objectives) {
    for (const auto &m : o.at("metrics")) {
      const auto name = m.get<std::string>();
      if (std::find(metric_names.begin(), metric_names.end(), name) == metric_names.end()) {
        metric_names.push_back(name);
      }
    }
  }
  header.insert(header.end(), metric_names.begin(), metric_names.end());
  header.push_back("avg metrics");
  grid.push_back(header);
  double overall = 0.0;
  for (std::size_t m = 0; m < objectives.size(); ++m) {
    std::vector<std::string> row{objectives[m].at("name").get<std::string>()};
    const auto &means = winner.at("meta_metric_means")[m];
    for (const auto &name : metric_names) {
      row.push_back(means.contains(name) ? number_or_dash(means.at(name)) : "");
    }
    const double avg = winner.at("meta_objective_values")[m].get<double>();
    overall += avg / static_cast<double>(objectives.size());
    row.push_back(fixed(avg));
    grid.push_back(row);
  }
  print_table(out, grid, "  ");
  out << "  overall avg metrics " << fixed(overall) << '\n';
  out << '\n' << winner_line(report) << '\n';
}

void render_report_csv(const ordered_json &report, std::ostream &out) {
  out << "stage,criterion,top_trial_ids,train_best_trial_id,meta_best_trial_id,meta_best_value,"
         "stage_winner_trial_id\n";
  for (const auto &stage : report.at("stages")) {
    for (const auto &top : stage.at("top_sets")) {
      const auto name = top.at("criterion").get<std::string>();
      std::string ids;
      for (const auto &id : top.at("trial_ids")) {
        ids += (ids.empty() ? "" : " ") + std::to_string(id.get<std::uint64_t>());
      }
      const ordered_json *best = nullptr;
      for (const auto &c : stage.at("candidates")) {
        const double v = c.at("meta_criteria").at(name).get<double>();
        if (!best || v > best->at("meta_criteria").at(name).get<double>()) best = &c;
      }
      out << stage.at("stage").get<int>() << ',' << name << ',' << ids << ','
          << (top.at("trial_ids").empty() ? std::string()
                                          : std::to_string(top.at("trial_ids")[0].get<std::uint64_t>()))
          << ',' << best->at("trial_id").get<std::uint64_t>() << ','
          << best->at("meta_criteria").at(name).dump() << ','
          << stage.at("winner").at("trial_id").get<std::uint64_t>() << '\n';
    }
  }
}

int cmd_run(const StudyOptions &options, std::ostream &out, std::ostream &err) {
  return guarded(err, [&] {
    const auto config = load_study_config(options.config, effective_overrides(options));
    const auto dir = resolve_out_dir(options.out_dir, config.output_dir,
                                     std::filesystem::absolute(options.config).parent_path() / "out");
    const auto definition = build_study(config);
    const auto report = study::run_cumulative_pipeline(definition, [&](const study::StageReport &s) {
      out << "stage " << s.stage << ": " << s.dataset.size() << " trials ("
          << s.dataset.count(space::Provenance::seeded) << " seeded), best weighted "
          << fixed(s.best_weighted) << " (trial " << s.best_weighted_id << "), winner trial "
          << s.winner().trial.id << '\n';
    });
    const auto files = study::write_study_outputs(dir, definition, report);
    out << "report: " << files.report.string() << '\n'
        << "trials: " << files.trials_csv.string() << ", " << files.trials_jsonl.string() << '\n'
        << "pareto front: " << files.pareto.string() << '\n';
    return kExitOk;
  });
}

int cmd_datagen(const std::optional<std::filesystem::path> &spec_path,
                const std::optional<std::filesystem::path> &out_dir,
                const std::vector<Override> &overrides, std::optional<std::uint64_t> seed,
                std::ostream &out, std::ostream &err) {
  return guarded(err, [&] {
    auto all = overrides;
    if (seed) all.push_back({"seed", std::to_string(*seed)});
    const auto spec = spec_path ? load_generator_spec(*spec_path, all)
                                : parse_generator_spec("", "<defaults>", all);
    const auto dir = resolve_out_dir(out_dir, std::nullopt, "data");
    const auto data = datagen::generate(spec);
    const auto files = datagen::write_generated(dir, data);
    out << "corpus: " << files.corpus.string() << " (" << data.corpus.size() << " items)\n"
        << "queries: " << files.queries.string() << " (" << data.queries.size() << " queries)\n"
        << "train log: " << files.train_log.string() << " (" << data.train_log.size() << " rows)\n"
        << "meta log: " << files.meta_log.string() << " (" << data.meta_log.size() << " rows)\n";
    return kExitOk;
  });
}

int cmd_report(const std::filesystem::path &report_path, const std::string &format,
               std::ostream &out, std::ostream &err) {
  return guarded(err, [&] {
    if (format != "text" && format != "csv") {
      throw ConfigError("--format: expected text or csv, got '" + format + "'");
    }
    const auto report = load_report(report_path);
    std::ostringstream buffer;
    try {
      if (format == "csv") {
        render_report_csv(report, buffer);
      } else {
        render_report_text(report, buffer);
      }
    } catch (const nlohmann::json::exception &e) {
      throw DataError("malformed report " + report_path.string() + ": " + e.what());
    }
    out << buffer.str();
    return kExitOk;
  });
}

int cmd_vote(const StudyOptions &options, const std::filesystem::path &report_path,
             std::optional<int> stage, std::optional<std::size_t> top_n, std::ostream &out,
             std::ostream &err) {
  return guarded(err, [&] {
    const auto config = load_study_config(options.config, effective_overrides(options));
    auto definition = build_study(config);
    if (top_n) {
      if (*top_n < 1) throw ConfigError("--top-n must be >= 1");
      definition.top_n = *top_n;
    }
    const auto report = load_report(report_path);
    const auto &stages = report.at("stages");
    const int index = stage.value_or(static_cast<int>(stages.size()) - 1);
    if (index < 0 || static_cast<std::size_t>(index) >= stages.size()) {
      throw ConfigError("--stage: report has stages 0.." + std::to_string(stages.size() - 1));
    }
    std::vector<space::Trial> pool;
    try {
      const auto report_space = space::space_from_json(report.at("space"));
      for (const auto &c : stages[static_cast<std::size_t>(index)].at("candidates")) {
        space::Trial t;
        t.id = c.at("trial_id").get<std::uint64_t>();
        t.stage = index;
        t.config = space::config_from_json(report_space, c.at("config"));
        t.objective_values = c.at("train_objective_values").get<std::vector<double>>();
        pool.push_back(std::move(t));
      }
    } catch (const nlohmann::json::exception &e) {
      throw DataError("malformed report " + report_path.string() + ": " + e.what());
    }
    if (pool.empty()) throw DataError("stage " + std::to_string(index) + " has no candidates");
    const auto criteria = definition.effective_criteria();
    const auto directions = definition.directions();
    const auto train_ids = definition.train->query_ids();
    const auto scores = study::meta_evaluate(pool, *definition.meta, criteria, definition.weights,
                                             directions, train_ids, definition.allow_identity_split);
    const auto vote = study::vote_select(scores, criteria, definition.top_n);

    ordered_json candidates = ordered_json::array();
    for (std::size_t i = 0; i < scores.size(); ++i) {
      ordered_json crit = ordered_json::object();
      ordered_json in_top = ordered_json::array();
      for (std::size_t k = 0; k < criteria.size(); ++k) {
        crit[criteria[k].name] = scores[i].criteria[k];
        if (vote.tally.entries[i].in_top[k]) in_top.push_back(criteria[k].name);
      }
      candidates.push_back({{"trial_id", scores[i].trial.id},
                            {"votes", vote.tally.entries[i].votes},
                            {"meta_criteria", crit},
                            {"meta_weighted", scores[i].weighted},
                            {"in_top", in_top}});
    }
    ordered_json names = ordered_json::array();
    for (const auto &c : criteria) names.push_back(c.name);
    out << "stage " << index << " vote tally (* = in that criterion's top-" << definition.top_n
        << "):\n";
    print_table(out, tally_rows(candidates, names), "  ");
    const auto &w = scores[vote.winner];
    out << "winner: trial " << w.trial.id << " (" << vote.tally.entries[vote.winner].votes
        << " votes, meta weighted " << fixed(w.weighted) << ") "
        << config_line(space::config_to_json(definition.train->space(), w.trial.config)) << '\n';
    return kExitOk;
  });
}

int cmd_oracle(const StudyOptions &options, std::size_t resolution, std::size_t cap,
               std::ostream &out, std::ostream &err) {
  return guarded(err, [&] {
    const auto config = load_study_config(options.config, effective_overrides(options));
    const auto definition = build_study(config);
    const auto result = datagen::oracle_best(*definition.train, resolution, definition.weights, cap);
    const auto &space = definition.train->space();
    auto entry = [&](const datagen::OracleEntry &e) {
      return ordered_json{{"config", space::config_to_json(space, e.config)},
                          {"objective_values", e.objective_values},
                          {"weighted", e.weighted}};
    };
    ordered_json j;
    j["resolution"] = resolution;
    j["evaluated"] = result.evaluated;
    j["skipped"] = result.skipped;
    j["best"] = entry(result.best);
    ordered_json per = ordered_json::object();
    for (std::size_t m = 0; m < result.best_per_objective.size(); ++m) {
      per[definition.train->specs()[m].name] = entry(result.best_per_objective[m]);
    }
    j["best_per_objective"] = per;
    out << j.dump(2) << '\n';
    return kExitOk;
  });
}

}  // namespace mohpo::cli
