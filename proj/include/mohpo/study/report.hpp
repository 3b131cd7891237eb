#pragma once

#include <filesystem>
#include <iosfwd>

#include <nlohmann/json.hpp>

#include "mohpo/study/pipeline.hpp"

namespace mohpo::study {

using ordered_json = nlohmann::ordered_json;

ordered_json objective_to_json(const objectives::ObjectiveSpec &spec);

/// The study report: a header describing the study followed by one entry per
/// stage and the final winner. Contains nothing that depends on timing or on
/// the parallelism degree.
ordered_json report_to_json(const StudyDefinition &definition, const StudyReport &report);

/// Flat export: one row per trial of every stage.
void write_trials_csv(std::ostream &out, const StudyDefinition &definition,
                      const StudyReport &report);

void write_trials_jsonl(std::ostream &out, const StudyDefinition &definition,
                        const StudyReport &report);

/// Non-dominated set over all sampled trials of the study, one per line.
void write_pareto_jsonl(std::ostream &out, const StudyDefinition &definition,
                        const StudyReport &report);

struct OutputFiles {
  std::filesystem::path report;
  std::filesystem::path trials_csv;
  std::filesystem::path trials_jsonl;
  std::filesystem::path pareto;
};

/// Writes report.json, trials.csv, trials.jsonl and pareto_front.jsonl into
/// `dir`, creating it if needed. Throws std::runtime_error when a file cannot
/// be written.
OutputFiles write_study_outputs(const std::filesystem::path &dir,
                                const StudyDefinition &definition, const StudyReport &report);

}  // namespace mohpo::study
