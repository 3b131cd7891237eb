#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "mohpo/common/errors.hpp"
#include "mohpo/space/sampling.hpp"
#include "mohpo/space/serialization.hpp"

using namespace mohpo;
using namespace mohpo::space;
using mohpo::testing::make_trial;
using mohpo::testing::random_dataset;

namespace {

bool has_error(const ValidationReport &r, const std::string &needle) {
  return std::any_of(r.errors.begin(), r.errors.end(),
                     [&](const std::string &e) { return e.find(needle) != std::string::npos; });
}

// O(n^2) pairwise check, written against raw values and flags.
std::vector<std::uint64_t> brute_front(const ObservationDataset &d,
                                       const std::vector<Direction> &dirs) {
  std::vector<std::uint64_t> out;
  for (const auto &a : d) {
    bool dominated = false;
    for (const auto &b : d) {
      bool all_ge = true, one_gt = false;
      for (std::size_t m = 0; m < dirs.size(); ++m) {
        double x = b.objective_values[m], y = a.objective_values[m];
        if (dirs[m] == Direction::minimize) {
          x = -x;
          y = -y;
        }
        all_ge = all_ge && x >= y;
        one_gt = one_gt || x > y;
      }
      dominated = dominated || (all_ge && one_gt);
    }
    if (!dominated) out.push_back(a.id);
  }
  return out;
}

std::vector<std::uint64_t> ids(const std::vector<Trial> &trials) {
  std::vector<std::uint64_t> out;
  for (const auto &t : trials) out.push_back(t.id);
  return out;
}

}  // namespace

TEST(ValidateSpace, AcceptsUnitInterval) {
  EXPECT_TRUE(validate_space(SearchSpace({{"a", ContinuousRange{0.0, 1.0}}})).ok());
}

TEST(ValidateSpace, RejectsEmptyRange) {
  auto r = validate_space(SearchSpace({{"a", ContinuousRange{1.0, 1.0}}}));
  EXPECT_TRUE(has_error(r, "lo < hi violated"));
}

TEST(ValidateSpace, RejectsLogScaleFromZero) {
  auto r = validate_space(SearchSpace({{"a", ContinuousRange{0.0, 10.0, Scale::log}}}));
  EXPECT_TRUE(has_error(r, "log scale requires lo > 0"));
}

TEST(ValidateSpace, ReportsEveryViolation) {
  SearchSpace s({{"a", ContinuousRange{1.0, 1.0}},
                 {"a", IntegerRange{0, 5, Scale::log}},
                 {"c", CategoricalChoices{{}}},
                 {"d", GridPoints{{1.0, 1.0}}}});
  auto r = validate_space(s);
  EXPECT_TRUE(has_error(r, "lo < hi violated"));
  EXPECT_TRUE(has_error(r, "duplicate name"));
  EXPECT_TRUE(has_error(r, "log scale requires lo > 0"));
  EXPECT_TRUE(has_error(r, "must be non-empty"));
  EXPECT_TRUE(has_error(r, "duplicate grid value"));
  EXPECT_TRUE(has_error(validate_space(SearchSpace{}), "no parameters"));
}

TEST(ValidateConfig, ChecksAssignmentsAndDomains) {
  SearchSpace s({{"a", ContinuousRange{0.0, 1.0}}, {"b", CategoricalChoices{{"x", "y"}}}});
  HPConfig c;
  c.set("a", 0.5);
  c.set("b", ChoiceIndex{1});
  EXPECT_TRUE(validate_config(s, c).ok());
  c.set("a", 1.5);
  EXPECT_FALSE(validate_config(s, c).ok());
  HPConfig missing;
  missing.set("a", 0.2);
  EXPECT_FALSE(validate_config(s, missing).ok());
}

TEST(SampleUniform, SingletonCategorical) {
  SearchSpace s({{"c", CategoricalChoices{{"A"}}}});
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(std::get<ChoiceIndex>(sample_uniform(s, rng).at("c")).index, 0u);
  }
}

TEST(SampleUniform, ContinuousMean) {
  SearchSpace s({{"x", ContinuousRange{0.0, 1.0}}});
  Rng rng(11);
  double sum = 0.0;
  for (int i = 0; i < 10000; ++i) sum += std::get<double>(sample_uniform(s, rng).at("x"));
  EXPECT_NEAR(sum / 10000.0, 0.5, 0.02);
}

TEST(SampleUniform, LogScaleMedianNearGeometricMean) {
  SearchSpace s({{"x", ContinuousRange{1.0, 100.0, Scale::log}}});
  Rng rng(5);
  std::vector<double> v;
  for (int i = 0; i < 10000; ++i) v.push_back(std::get<double>(sample_uniform(s, rng).at("x")));
  std::nth_element(v.begin(), v.begin() + 5000, v.end());
  EXPECT_GE(v[5000], 8.0);
  EXPECT_LE(v[5000], 12.0);
}

TEST(SampleUniform, RandomSpacesAlwaysValidate) {
  Rng meta(2024);
  for (int round = 0; round < 50; ++round) {
    std::vector<ParamSpec> params;
    const int n = 1 + static_cast<int>(meta.below(4));
    for (int i = 0; i < n; ++i) {
      const std::string name = "p" + std::to_string(i);
      switch (meta.below(5)) {
        case 0: params.push_back({name, ContinuousRange{-1.0, 2.0}}); break;
        case 1: params.push_back({name, ContinuousRange{0.01, 50.0, Scale::log}}); break;
        case 2: params.push_back({name, IntegerRange{-3, 7}}); break;
        case 3: params.push_back({name, IntegerRange{1, 1000, Scale::log}}); break;
        default: params.push_back({name, CategoricalChoices{{"a", 2.0, "c"}}}); break;
      }
    }
    SearchSpace s(params);
    ASSERT_TRUE(validate_space(s).ok());
    Rng rng(round);
    for (int i = 0; i < 50; ++i) EXPECT_TRUE(validate_config(s, sample_uniform(s, rng)).ok());
  }
}

TEST(SampleUniform, DeterministicPerSeed) {
  SearchSpace s({{"x", ContinuousRange{0.0, 1.0}}, {"k", IntegerRange{1, 9}}});
  Rng a(9), b(9);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(sample_uniform(s, a), sample_uniform(s, b));
}

TEST(ObservationDataset, EnforcesIdsAndWidth) {
  ObservationDataset d;
  d.append(make_trial(3, {0.1, 0.2}));
  EXPECT_THROW(d.append(make_trial(3, {0.1, 0.2})), std::invalid_argument);
  EXPECT_THROW(d.append(make_trial(4, {0.1})), std::invalid_argument);
  EXPECT_THROW(d.append(make_trial(5, {0.1, std::nan("")})), std::invalid_argument);
  d.append(make_trial(7, {0.3, 0.4}));
  EXPECT_EQ(d.size(), 2u);
  EXPECT_EQ(d.objective_count(), 2u);
}

TEST(ObservationDataset, SeededPrecedeSampledWithinStage) {
  ObservationDataset d;
  d.append(make_trial(0, {0.1}, 0.0, Provenance::seeded, 1));
  d.append(make_trial(1, {0.1}, 0.0, Provenance::sampled, 1));
  EXPECT_THROW(d.append(make_trial(2, {0.1}, 0.0, Provenance::seeded, 1)), std::invalid_argument);
  EXPECT_EQ(d.count(Provenance::seeded), 1u);
}

TEST(ParetoFront, StrictDomination) {
  ObservationDataset d;
  d.append(make_trial(0, {1.0, 1.0}));
  d.append(make_trial(1, {0.0, 0.0}));
  const std::vector<Direction> dirs{Direction::maximize, Direction::maximize};
  EXPECT_EQ(ids(pareto_front(d, dirs)), (std::vector<std::uint64_t>{0}));
}

TEST(ParetoFront, IncomparablePair) {
  ObservationDataset d;
  d.append(make_trial(0, {1.0, 0.0}));
  d.append(make_trial(1, {0.0, 1.0}));
  const std::vector<Direction> dirs{Direction::maximize, Direction::maximize};
  EXPECT_EQ(ids(pareto_front(d, dirs)), (std::vector<std::uint64_t>{0, 1}));
}

TEST(ParetoFront, EmptyDataset) {
  EXPECT_TRUE(pareto_front(ObservationDataset{}, std::vector<Direction>{}).empty());
}

TEST(ParetoFront, MatchesPairwiseOracle) {
  Rng rng(77);
  for (int round = 0; round < 200; ++round) {
    const std::size_t n = 1 + rng.below(8);
    const std::size_t m = 1 + rng.below(3);
    auto d = random_dataset(rng, n, m, round % 2 ? 3 : 0);
    std::vector<Direction> dirs;
    for (std::size_t i = 0; i < m; ++i) {
      dirs.push_back(rng.below(2) ? Direction::maximize : Direction::minimize);
    }
    EXPECT_EQ(ids(pareto_front(d, dirs)), brute_front(d, dirs)) << "round " << round;
  }
}

TEST(ParetoFront, Idempotent) {
  Rng rng(12);
  const std::vector<Direction> dirs{Direction::maximize, Direction::minimize};
  for (int round = 0; round < 50; ++round) {
    auto d = random_dataset(rng, 12, 2, 4);
    auto once = pareto_front(d, dirs);
    ObservationDataset front;
    for (const auto &t : once) front.append(t);
    EXPECT_EQ(ids(pareto_front(front, dirs)), ids(once));
  }
}

TEST(Direction, OrientationAndParsing) {
  EXPECT_EQ(oriented(0.3, Direction::maximize), 0.3);
  EXPECT_EQ(oriented(0.3, Direction::minimize), -0.3);
  EXPECT_EQ(canonical(0.3, Direction::maximize), -0.3);
  EXPECT_EQ(parse_direction("minimize"), Direction::minimize);
  EXPECT_THROW(parse_direction("sideways"), ConfigError);
}

TEST(Serialization, TrialFieldOrderAndRoundTrip) {
  SearchSpace s({{"x", ContinuousRange{0.0, 1.0}},
                 {"k", IntegerRange{1, 10}},
                 {"mode", CategoricalChoices{{"bm25", "hybrid"}}},
                 {"g", GridPoints{{0.5, 2.0}}}});
  Trial t;
  t.id = 4;
  t.stage = 1;
  t.config.set("x", 0.125);
  t.config.set("k", std::int64_t{7});
  t.config.set("mode", ChoiceIndex{1});
  t.config.set("g", ChoiceIndex{0});
  t.objective_values = {0.25, 0.5};
  t.provenance = Provenance::seeded;
  const auto j = trial_to_json(s, t);
  std::vector<std::string> keys;
  for (const auto &[k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"id", "stage", "config", "objective_values",
                                            "provenance"}));
  EXPECT_EQ(j["config"]["mode"], "hybrid");
  const auto back = trial_from_json(s, j);
  EXPECT_EQ(back.config, t.config);
  EXPECT_EQ(back.objective_values, t.objective_values);
  EXPECT_EQ(back.provenance, Provenance::seeded);
  EXPECT_EQ(space_to_json(space_from_json(space_to_json(s))), space_to_json(s));
}

TEST(Serialization, JsonLinesOnePerTrial) {
  Rng rng(1);
  auto d = random_dataset(rng, 5, 2);
  std::ostringstream out;
  write_trials_jsonl(out, mohpo::testing::unit_space(), d);
  const auto text = out.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 5);
}
