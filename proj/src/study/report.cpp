#include "mohpo/study/report.hpp"

#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "mohpo/sampling/tpe.hpp"
#include "mohpo/space/serialization.hpp"

namespace mohpo::study {

namespace {

std::string csv_number(double x) {
  std::ostringstream out;
  out.precision(17);
  out << x;
  return out.str();
}

std::string csv_field(const std::string &text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

ordered_json optional_to_json(const std::optional<double> &v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json stage_to_json(const StudyDefinition &d, const StageReport &stage,
                           const std::vector<Criterion> &criteria) {
  const auto &space = d.train->space();
  const auto &specs = d.train->specs();
  const auto directions = d.directions();
  ordered_json j;
  j["stage"] = stage.stage;
  j["budget"] = stage.budget;
  j["n_trials"] = stage.dataset.size();
  j["n_seeded"] = stage.dataset.count(space::Provenance::seeded);
  if (stage.seeding) {
    j["seeding"] = {{"gamma", stage.seeding->gamma},
                    {"passed_filter", stage.seeding->passed_filter},
                    {"seeded", stage.seeding->seeded},
                    {"elite_added", stage.seeding->elite_added},
                    {"fallback", stage.seeding->fallback}};
  } else {
    j["seeding"] = nullptr;
  }
  j["best_weighted"] = {{"trial_id", stage.best_weighted_id}, {"value", stage.best_weighted}};

  ordered_json per_objective = ordered_json::array();
  for (std::size_t m = 0; m < specs.size(); ++m) {
    const space::Trial *best = nullptr;
    for (const auto &t : stage.dataset) {
      if (!best || space::oriented(t.objective_values[m], directions[m]) >
                       space::oriented(best->objective_values[m], directions[m])) {
        best = &t;
      }
    }
    per_objective.push_back(
        {{"objective", specs[m].name}, {"trial_id", best->id}, {"value", best->objective_values[m]}});
  }
  j["best_per_objective"] = per_objective;
  j["pareto_ids"] = stage.pareto_ids;

  ordered_json trials = ordered_json::array();
  for (const auto &t : stage.dataset) {
    trials.push_back({{"id", t.id},
                      {"provenance", space::to_string(t.provenance)},
                      {"objective_values", t.objective_values},
                      {"weighted", sampling::weighted_sum_reduce(t.objective_values, d.weights,
                                                                 directions)}});
  }
  j["trials"] = trials;

  ordered_json tops = ordered_json::array();
  for (const auto &top : stage.top.per_criterion) {
    std::vector<std::uint64_t> ids;
    for (const auto &t : top.trials) ids.push_back(t.id);
    tops.push_back({{"criterion", top.criterion.name}, {"trial_ids", ids}});
  }
  j["top_sets"] = tops;

  ordered_json candidates = ordered_json::array();
  for (std::size_t i = 0; i < stage.meta_scores.size(); ++i) {
    const auto &c = stage.meta_scores[i];
    const auto &entry = stage.vote.tally.entries[i];
    ordered_json crit = ordered_json::object();
    for (std::size_t k = 0; k < criteria.size(); ++k) crit[criteria[k].name] = c.criteria[k];
    ordered_json in_top = ordered_json::array();
    for (std::size_t k = 0; k < criteria.size(); ++k) {
      if (entry.in_top[k]) in_top.push_back(criteria[k].name);
    }
    ordered_json metrics = ordered_json::array();
    for (std::size_t m = 0; m < c.metric_means.size(); ++m) {
      ordered_json row = ordered_json::object();
      for (std::size_t q = 0; q < c.metric_means[m].size(); ++q) {
        row[objectives::to_string(specs[m].metrics[q])] = optional_to_json(c.metric_means[m][q]);
      }
      metrics.push_back(row);
    }
    candidates.push_back({{"trial_id", c.trial.id},
                          {"config", space::config_to_json(space, c.trial.config)},
                          {"train_objective_values", c.trial.objective_values},
                          {"meta_objective_values", c.objective_values},
                          {"meta_criteria", crit},
                          {"meta_weighted", c.weighted},
                          {"meta_metric_means", metrics},
                          {"votes", entry.votes},
                          {"in_top", in_top}});
  }
  j["candidates"] = candidates;

  const auto &w = stage.winner();
  j["winner"] = {{"trial_id", w.trial.id},
                 {"config", space::config_to_json(space, w.trial.config)},
                 {"votes", stage.vote.tally.entries[stage.vote.winner].votes},
                 {"meta_weighted", w.weighted},
                 {"meta_objective_values", w.objective_values}};
  return j;
}

std::vector<const space::Trial *> all_trials(const StudyReport &report) {
  std::vector<const space::Trial *> out;
  for (const auto &stage : report.stages) {
    for (const auto &t : stage.dataset) out.push_back(&t);
  }
  return out;
}

}  // namespace

ordered_json objective_to_json(const objectives::ObjectiveSpec &spec) {
  ordered_json j;
  j["name"] = spec.name;
  j["event"] = objectives::to_string(spec.numerator);
  j["direction"] = space::to_string(spec.direction);
  j["min_impressions"] = spec.min_impressions;
  if (spec.smoothing) {
    j["smoothing"] = {{"alpha", spec.smoothing->alpha}, {"beta", spec.smoothing->beta}};
  } else {
    j["smoothing"] = nullptr;
  }
  j["positive_threshold"] = spec.positive_threshold;
  std::vector<std::string> metrics;
  for (const auto &m : spec.metrics) metrics.push_back(objectives::to_string(m));
  j["metrics"] = metrics;
  return j;
}

ordered_json report_to_json(const StudyDefinition &d, const StudyReport &report) {
  const auto criteria = d.effective_criteria();
  ordered_json j;
  j["format"] = "mohpo-report/1";
  j["seed"] = d.seed;
  j["sampler"] = {{"name", std::string(d.sampler->name())}, {"settings", d.sampler->settings()}};
  j["space"] = space::space_to_json(d.train->space());
  ordered_json objectives = ordered_json::array();
  for (const auto &spec : d.train->specs()) objectives.push_back(objective_to_json(spec));
  j["objectives"] = objectives;
  j["weights"] = d.weights;
  std::vector<std::string> names;
  for (const auto &c : criteria) names.push_back(c.name);
  j["criteria"] = names;
  j["top_n"] = d.top_n;
  j["cumulative"] = {{"stages", d.cumulative.stages},
                     {"seed_quantile", d.cumulative.seed_quantile},
                     {"max_seeds", d.cumulative.max_seeds}};
  j["train_queries"] = d.train->queries().size();
  j["meta_queries"] = d.meta->queries().size();

  ordered_json stages = ordered_json::array();
  for (const auto &stage : report.stages) stages.push_back(stage_to_json(d, stage, criteria));
  j["stages"] = stages;

  const auto &last = report.stages.back();
  j["winner"] = {{"stage", last.stage},
                 {"trial_id", last.winner().trial.id},
                 {"config", space::config_to_json(d.train->space(), last.winner().trial.config)},
                 {"meta_weighted", last.winner().weighted}};
  return j;
}

void write_trials_csv(std::ostream &out, const StudyDefinition &d, const StudyReport &report) {
  const auto &space = d.train->space();
  const auto &specs = d.train->specs();
  const auto directions = d.directions();
  out << "id,stage,provenance";
  for (const auto &p : space.params()) out << ',' << csv_field(p.name);
  for (const auto &s : specs) out << ',' << csv_field(s.name);
  out << ",weighted\n";
  for (const auto *t : all_trials(report)) {
    out << t->id << ',' << t->stage << ',' << space::to_string(t->provenance);
    for (const auto &p : space.params()) {
      out << ',' << csv_field(space::format_value(p, t->config.at(p.name)));
    }
    for (double z : t->objective_values) out << ',' << csv_number(z);
    out << ',' << csv_number(sampling::weighted_sum_reduce(t->objective_values, d.weights, directions))
        << '\n';
  }
}

void write_trials_jsonl(std::ostream &out, const StudyDefinition &d, const StudyReport &report) {
  for (const auto *t : all_trials(report)) {
    out << space::trial_to_json(d.train->space(), *t).dump() << '\n';
  }
}

void write_pareto_jsonl(std::ostream &out, const StudyDefinition &d, const StudyReport &report) {
  space::ObservationDataset sampled;
  for (const auto *t : all_trials(report)) {
    if (t->provenance == space::Provenance::sampled) sampled.append(*t);
  }
  if (sampled.empty()) return;
  for (const auto &t : space::pareto_front(sampled, d.directions())) {
    out << space::trial_to_json(d.train->space(), t).dump() << '\n';
  }
}

OutputFiles write_study_outputs(const std::filesystem::path &dir, const StudyDefinition &d,
                                const StudyReport &report) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
  OutputFiles files{dir / "report.json", dir / "trials.csv", dir / "trials.jsonl",
                    dir / "pareto_front.jsonl"};
  auto open = [](const std::filesystem::path &p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    return out;
  };
  {
    auto out = open(files.report);
    out << report_to_json(d, report).dump(2) << '\n';
  }
  {
    auto out = open(files.trials_csv);
    write_trials_csv(out, d, report);
  }
  {
    auto out = open(files.trials_jsonl);
    write_trials_jsonl(out, d, report);
  }
  {
    auto out = open(files.pareto);
    write_pareto_jsonl(out, d, report);
  }
  return files;
}

}  // namespace mohpo::study
