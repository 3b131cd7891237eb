#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "mohpo/cli/commands.hpp"
#include "mohpo/cli/config.hpp"
#include "mohpo/common/errors.hpp"

using namespace mohpo;
using namespace mohpo::cli;
namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const fs::path &p, const std::string &text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

std::size_t line_count(const std::string &text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

const char *kStudy = R"(seed: 3
parallelism: 1
data:
  corpus: data/corpus.jsonl
  queries: data/queries.jsonl
  train_log: data/train_log.csv
  meta_log: data/meta_log.csv
space:
  - {name: lexical, type: continuous, low: 0.0, high: 1.0}
  - {name: dense, type: continuous, low: 0.0, high: 1.0}
  - {name: views, type: continuous, low: 0.0, high: 1.0}
sampler: {name: tpe, mode: separate, n_startup: 3}
objectives:
  - {name: ctr, event: clicks, min_impressions: 10, smoothing: {alpha: 1.0, beta: 30.0},
     positive_threshold: 0.05, metrics: [ndcg@20, precision@20]}
  - {name: ctcvr, event: purchases, min_impressions: 10, smoothing: {alpha: 0.1, beta: 30.0},
     positive_threshold: 0.005, metrics: [ndcg@20]}
weights: {ctr: 0.5, ctcvr: 0.5}
transform:
  candidate_k: 50
  normalization: minmax
  weights: {lexical: lexical, dense: dense, views: views}
meta: {top_n: 3}
cumulative: {stages: [6, 6], seed_quantile: 0.8, max_seeds: 4}
)";

class CliFixture : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    root = new fs::path(fs::temp_directory_path() / "mohpo_cli_test");
    fs::remove_all(*root);
    fs::create_directories(*root);
    std::ostringstream out, err;
    const int rc = cmd_datagen(std::nullopt, *root / "data",
                               {{"n_items", "60"}, {"n_queries", "8"}, {"n_meta_queries", "8"},
                                {"vocab_size", "150"}, {"impressions_per_pair", "300"}},
                               5, out, err);
    ASSERT_EQ(rc, kExitOk) << err.str();
    spit(*root / "study.yaml", kStudy);
  }
  static void TearDownTestSuite() {
    fs::remove_all(*root);
    delete root;
  }

  static StudyOptions options() {
    StudyOptions o;
    o.config = *root / "study.yaml";
    return o;
  }

  static fs::path run(StudyOptions o, const std::string &name) {
    o.out_dir = *root / name;
    std::ostringstream out, err;
    EXPECT_EQ(cmd_run(o, out, err), kExitOk) << err.str();
    return *o.out_dir;
  }

  static fs::path *root;
};

fs::path *CliFixture::root = nullptr;

}  // namespace

TEST(Overrides, Parsing) {
  const auto o = parse_override("cumulative.stages=[5, 5]");
  EXPECT_EQ(o.key, "cumulative.stages");
  EXPECT_EQ(o.value, "[5, 5]");
  EXPECT_THROW(parse_override("novalue"), ConfigError);
  EXPECT_THROW(parse_override("=3"), ConfigError);
}

TEST(Overrides, OutDirPrecedence) {
  const fs::path flag("a"), configured("b"), fallback("c");
  EXPECT_EQ(resolve_out_dir(flag, configured, fallback), flag);
  EXPECT_EQ(resolve_out_dir(std::nullopt, configured, fallback), configured);
}

TEST_F(CliFixture, ConfigErrorsNameLineAndKey) {
  const auto bad = *root / "bad.yaml";
  std::string text = kStudy;
  text.replace(text.find("seed: 3"), 7, "seed: abc");
  text.replace(text.find("meta: {top_n: 3}"), 16, "meta: {top_n: 3, bogus: 1}");
  spit(bad, text);
  try {
    load_study_config(bad);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError &e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("bad.yaml:1: seed:"), std::string::npos) << what;
    EXPECT_NE(what.find("bad.yaml:23: meta.bogus:"), std::string::npos) << what;
  }
  StudyOptions o;
  o.config = bad;
  o.out_dir = *root / "bad_out";
  std::ostringstream out, err;
  EXPECT_EQ(cmd_run(o, out, err), kExitConfig);
  EXPECT_FALSE(fs::exists(*root / "bad_out"));
}

TEST_F(CliFixture, OverrideErrorsNameTheFlag) {
  try {
    load_study_config(*root / "study.yaml", {{"meta.top_n", "zero"}});
    FAIL() << "expected ConfigError";
  } catch (const ConfigError &e) {
    EXPECT_NE(std::string(e.what()).find("--override meta.top_n"), std::string::npos) << e.what();
  }
}

TEST_F(CliFixture, MissingDataFileIsConfigError) {
  std::string text = kStudy;
  text.replace(text.find("data/corpus.jsonl"), 17, "data/nope.jsonl");
  spit(*root / "missing.yaml", text);
  EXPECT_THROW(load_study_config(*root / "missing.yaml"), ConfigError);
}

TEST_F(CliFixture, SeedFlagMatchesInlineSeed) {
  auto o = options();
  o.seed = 11;
  const auto a = run(o, "seed_flag");
  std::string text = kStudy;
  text.replace(text.find("seed: 3"), 7, "seed: 11");
  spit(*root / "seed11.yaml", text);
  StudyOptions inline_seed;
  inline_seed.config = *root / "seed11.yaml";
  const auto b = run(inline_seed, "seed_inline");
  EXPECT_EQ(slurp(a / "report.json"), slurp(b / "report.json"));
  EXPECT_EQ(slurp(a / "trials.csv"), slurp(b / "trials.csv"));
}

TEST_F(CliFixture, StageBudgetFlag) {
  auto o = options();
  o.stage_budgets = "5";
  const auto dir = run(o, "budget5");
  EXPECT_EQ(line_count(slurp(dir / "trials.csv")), 6u);  // header + 5
  const auto report = json::parse(slurp(dir / "report.json"));
  EXPECT_EQ(report.at("stages").size(), 1u);
  EXPECT_EQ(report.at("stages")[0].at("n_trials").get<int>(), 5);
  o.stage_budgets = "5,x";
  o.out_dir = *root / "budget_bad";
  std::ostringstream out, err;
  EXPECT_EQ(cmd_run(o, out, err), kExitConfig);
}

TEST_F(CliFixture, ExportsAreByteIdentical) {
  const auto a = run(options(), "det_a");
  const auto b = run(options(), "det_b");
  auto par = options();
  par.parallel = 4;
  const auto c = run(par, "det_par");
  for (const char *f : {"report.json", "trials.csv", "trials.jsonl", "pareto_front.jsonl"}) {
    const auto base = slurp(a / f);
    EXPECT_FALSE(base.empty()) << f;
    EXPECT_EQ(base, slurp(b / f)) << f;
    EXPECT_EQ(base, slurp(c / f)) << f;
  }
}

TEST_F(CliFixture, ReportRendering) {
  const auto dir = run(options(), "render");
  const auto report = json::parse(slurp(dir / "report.json"));
  std::ostringstream text, csv, err;
  ASSERT_EQ(cmd_report(dir / "report.json", "text", text, err), kExitOk) << err.str();
  const auto &w = report.at("winner");
  const std::string expected = "winner: stage " + std::to_string(w.at("stage").get<int>()) +
                               " trial " + std::to_string(w.at("trial_id").get<int>());
  EXPECT_NE(text.str().find(expected), std::string::npos) << text.str();
  EXPECT_NE(text.str().find("ndcg@20"), std::string::npos);

  ASSERT_EQ(cmd_report(dir / "report.json", "csv", csv, err), kExitOk);
  const std::size_t rows = report.at("stages").size() * report.at("criteria").size();
  EXPECT_EQ(line_count(csv.str()), rows + 1);

  std::ostringstream out;
  EXPECT_EQ(cmd_report(dir / "report.json", "xml", out, err), kExitConfig);
  spit(*root / "broken.json", "{\"format\": ");
  EXPECT_EQ(cmd_report(*root / "broken.json", "text", out, err), kExitRuntime);
  EXPECT_EQ(cmd_report(*root / "absent.json", "text", out, err), kExitRuntime);
}

TEST_F(CliFixture, VoteReproducesReportWinner) {
  const auto dir = run(options(), "vote");
  const auto report = json::parse(slurp(dir / "report.json"));
  std::ostringstream out, err;
  ASSERT_EQ(cmd_vote(options(), dir / "report.json", std::nullopt, std::nullopt, out, err), kExitOk)
      << err.str();
  const auto last = report.at("stages").back();
  const std::string id = std::to_string(last.at("winner").at("trial_id").get<int>());
  EXPECT_NE(out.str().find("trial " + id), std::string::npos) << out.str();
}

TEST_F(CliFixture, OracleCommand) {
  std::ostringstream out, err;
  ASSERT_EQ(cmd_oracle(options(), 2, 100, out, err), kExitOk) << err.str();
  const auto j = json::parse(out.str());
  EXPECT_EQ(j.at("evaluated").get<int>(), 7);
  EXPECT_EQ(j.at("skipped").get<int>(), 1);
  std::ostringstream out2;
  EXPECT_EQ(cmd_oracle(options(), 9, 100, out2, err), kExitConfig);
}

TEST_F(CliFixture, UnwritableOutDir) {
  spit(*root / "plain_file", "x");
  auto o = options();
  o.out_dir = *root / "plain_file" / "sub";
  std::ostringstream out, err;
  EXPECT_EQ(cmd_run(o, out, err), kExitRuntime);
  EXPECT_FALSE(err.str().empty());
}

TEST_F(CliFixture, DatagenDefaultsAndErrors) {
  const auto dir = *root / "gen_default";
  std::ostringstream out, err;
  ASSERT_EQ(cmd_datagen(std::nullopt, dir, {}, 1, out, err), kExitOk) << err.str();
  EXPECT_EQ(line_count(slurp(dir / "corpus.jsonl")), 200u);
  EXPECT_EQ(line_count(slurp(dir / "queries.jsonl")), 100u);
  EXPECT_EQ(line_count(slurp(dir / "train_log.csv")), 50u * 200u + 1);
  EXPECT_EQ(line_count(slurp(dir / "meta_log.csv")), 50u * 200u + 1);

  const auto again = *root / "gen_again";
  ASSERT_EQ(cmd_datagen(std::nullopt, again, {}, 1, out, err), kExitOk);
  for (const char *f : {"corpus.jsonl", "queries.jsonl", "train_log.csv", "meta_log.csv"}) {
    EXPECT_EQ(slurp(dir / f), slurp(again / f)) << f;
  }

  EXPECT_EQ(cmd_datagen(std::nullopt, *root / "gen_bad", {{"n_queries", "0"}}, 1, out, err),
            kExitConfig);
  spit(*root / "gen.yaml", "n_items: 30\nfunnel: {base_ctr: 2.0}\n");
  std::ostringstream err2;
  EXPECT_EQ(cmd_datagen(*root / "gen.yaml", *root / "gen_bad2", {}, std::nullopt, out, err2),
            kExitConfig);
  EXPECT_NE(err2.str().find("base_ctr"), std::string::npos) << err2.str();
}
