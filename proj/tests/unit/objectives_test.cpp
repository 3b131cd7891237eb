#include <algorithm>
#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "metric_oracle.hpp"
#include "mohpo/common/errors.hpp"
#include "mohpo/common/rng.hpp"
#include "mohpo/objectives/evaluation.hpp"
#include "mohpo/objectives/interaction_log.hpp"
#include "mohpo/objectives/labels.hpp"
#include "mohpo/objectives/metrics.hpp"

using namespace mohpo;
using namespace mohpo::objectives;
using retrieval::RankedList;

namespace {

RankedList ranked(std::string qid, std::vector<std::string> items) {
  RankedList r;
  r.query_id = std::move(qid);
  double s = static_cast<double>(items.size());
  for (auto &i : items) r.items.push_back({std::move(i), s--});
  return r;
}

QueryLabels binary(std::initializer_list<std::pair<const char *, bool>> xs) {
  QueryLabels out;
  for (const auto &[id, pos] : xs) out[id] = {pos ? 1.0 : 0.0, pos};
  return out;
}

ObjectiveSpec spec(std::string name, std::vector<MetricSpec> metrics, std::int64_t min_imp = 0) {
  ObjectiveSpec s;
  s.name = std::move(name);
  s.min_impressions = min_imp;
  s.metrics = std::move(metrics);
  return s;
}

}  // namespace

TEST(EventRate, TableOneClickThroughRate) {
  const auto rate = event_rate(12'020'000, 367'540'000, std::nullopt);
  ASSERT_TRUE(rate);
  EXPECT_NEAR(*rate, 0.0327, 1e-4);
}

TEST(EventRate, SmoothingSpotValues) {
  EXPECT_DOUBLE_EQ(*event_rate(0, 0, Smoothing{1.0, 1.0}), 0.5);
  EXPECT_DOUBLE_EQ(*event_rate(2, 100, Smoothing{1.0, 99.0}), 0.015);
  EXPECT_FALSE(event_rate(0, 0, std::nullopt));
}

TEST(DeriveLabels, FilterThresholdAndSkip) {
  InteractionLog log;
  log.add("q1", "a", {100, 10, 0, 0});
  log.add("q1", "b", {5, 5, 0, 0});
  log.add("q1", "c", {100, 2, 0, 0});
  log.add("q2", "a", {0, 0, 0, 0});
  auto s = spec("ctr", {{MetricKind::ndcg, 10}}, 10);
  s.positive_threshold = 0.05;
  auto labels = derive_labels(log, s);
  const auto *q1 = labels.find("q1");
  ASSERT_TRUE(q1);
  EXPECT_EQ(q1->size(), 2u);
  EXPECT_DOUBLE_EQ(q1->at("a").graded, 0.1);
  EXPECT_TRUE(q1->at("a").positive);
  EXPECT_FALSE(q1->at("c").positive);
  EXPECT_FALSE(labels.find("q2"));

  // min_impressions 0 keeps zero-impression rows only when smoothed.
  s.min_impressions = 0;
  EXPECT_FALSE(derive_labels(log, s).find("q2"));
  s.smoothing = Smoothing{1.0, 1.0};
  EXPECT_DOUBLE_EQ(derive_labels(log, s).find("q2")->at("a").graded, 0.5);
}

TEST(DeriveLabels, MonotoneInNumerator) {
  Rng rng(2);
  for (int round = 0; round < 300; ++round) {
    const std::int64_t imp = 1 + static_cast<std::int64_t>(rng.below(500));
    const std::int64_t x = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(imp)));
    for (bool smooth : {false, true}) {
      auto s = spec("ctr", {{MetricKind::ndcg, 10}});
      if (smooth) s.smoothing = Smoothing{rng.uniform(0.1, 5.0), rng.uniform(0.1, 50.0)};
      InteractionLog lo, hi;
      lo.add("q", "i", {imp, x, 0, 0});
      hi.add("q", "i", {imp, x + 1, 0, 0});
      EXPECT_LE(derive_labels(lo, s).find("q")->at("i").graded,
                derive_labels(hi, s).find("q")->at("i").graded);
    }
  }
}

TEST(DeriveLabels, NumeratorEventSelectsColumn) {
  InteractionLog log;
  log.add("q", "i", {100, 40, 20, 10});
  auto s = spec("x", {{MetricKind::ndcg, 10}});
  s.numerator = Event::carts;
  EXPECT_DOUBLE_EQ(derive_labels(log, s).find("q")->at("i").graded, 0.2);
  s.numerator = Event::purchases;
  EXPECT_DOUBLE_EQ(derive_labels(log, s).find("q")->at("i").graded, 0.1);
}

TEST(Metrics, Examples) {
  const auto r = ranked("q", {"A", "B", "C"});
  const auto pos_ac = binary({{"A", true}, {"B", false}, {"C", true}});
  EXPECT_DOUBLE_EQ(precision_at_k(r, &pos_ac, 3), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(*map_at_k(r, &pos_ac, 3), 5.0 / 6.0);

  const auto pos_acd = binary({{"A", true}, {"C", true}, {"D", true}});
  EXPECT_DOUBLE_EQ(*recall_at_k(r, &pos_acd, 3), 2.0 / 3.0);

  QueryLabels graded{{"A", {3.0, true}}, {"B", {0.0, false}}, {"C", {1.0, true}}};
  const double idcg = 3.0 + 1.0 / std::log2(3.0);
  EXPECT_NEAR(idcg, 3.6309, 1e-4);
  EXPECT_NEAR(*ndcg_at_k(r, &graded, 3), 3.5 / idcg, 1e-15);
  EXPECT_NEAR(*ndcg_at_k(r, &graded, 3), 0.9639, 1e-4);
}

TEST(Metrics, EdgeCases) {
  const auto r = ranked("q", {"A", "B", "C"});
  const auto none = binary({{"A", false}, {"B", false}});
  EXPECT_EQ(precision_at_k(r, &none, 3), 0.0);
  EXPECT_EQ(precision_at_k(r, nullptr, 3), 0.0);
  EXPECT_FALSE(recall_at_k(r, &none, 3));
  EXPECT_FALSE(map_at_k(r, &none, 3));
  EXPECT_FALSE(ndcg_at_k(r, &none, 3));
  EXPECT_FALSE(ndcg_at_k(r, nullptr, 3));

  const auto all = binary({{"A", true}, {"B", true}, {"C", true}});
  EXPECT_EQ(*recall_at_k(r, &all, 10), 1.0);
  EXPECT_EQ(*map_at_k(r, &all, 2), 1.0);
  EXPECT_EQ(*ndcg_at_k(r, &all, 3), 1.0);
  // Equal gains: any permutation is ideal.
  EXPECT_EQ(*ndcg_at_k(ranked("q", {"C", "A", "B"}), &all, 3), 1.0);

  // Fixed-K denominator for short lists.
  EXPECT_DOUBLE_EQ(precision_at_k(ranked("q", {"A"}), &all, 4), 0.25);
}

TEST(Metrics, IdealOrderHasUnitNdcg) {
  Rng rng(4);
  for (int round = 0; round < 100; ++round) {
    QueryLabels labels;
    std::vector<std::pair<double, std::string>> items;
    for (int i = 0; i < 10; ++i) {
      const double g = rng.below(3) ? rng.uniform() : 0.0;
      labels["i" + std::to_string(i)] = {g, g > 0.5};
      items.push_back({g, "i" + std::to_string(i)});
    }
    std::sort(items.begin(), items.end(), std::greater<>());
    std::vector<std::string> ids;
    for (auto &[g, id] : items) ids.push_back(id);
    const auto v = ndcg_at_k(ranked("q", ids), &labels, 1 + rng.below(12));
    if (v) EXPECT_EQ(*v, 1.0);
  }
}

TEST(Metrics, ExhaustiveOracle) {
  const auto res = oracle::exhaustive_metric_sweep(6, 4, 1e-12);
  EXPECT_GT(res.checked, 100000u);
  EXPECT_EQ(res.mismatches, 0u) << res.first_mismatch;
}

TEST(Metrics, ParseAndFormat) {
  EXPECT_EQ(parse_metric("ndcg@20"), (MetricSpec{MetricKind::ndcg, 20}));
  EXPECT_EQ(to_string(MetricSpec{MetricKind::map, 5}), "map@5");
  EXPECT_THROW(parse_metric("ndcg"), ConfigError);
  EXPECT_THROW(parse_metric("mrr@3"), ConfigError);
  EXPECT_THROW(parse_metric("recall@0"), ConfigError);
  EXPECT_THROW(parse_metric("recall@x"), ConfigError);
}

TEST(Evaluate, Aggregation) {
  // Precision@1 with one positive in first place (1.0) and none (0.0).
  std::vector<RankedList> lists{ranked("q1", {"a", "b"}), ranked("q2", {"a", "b"})};
  LabelSet labels;
  labels.set("q1", "a", {1.0, true});
  labels.set("q2", "b", {1.0, true});
  std::vector<ObjectiveSpec> specs{spec("ctr", {{MetricKind::precision, 1}})};
  auto single = evaluate_objectives(std::span(lists).first(1), std::vector<LabelSet>{labels}, specs);
  EXPECT_EQ(single.aggregates[0], 1.0);

  // Precision@5: 1/5 and 3/5 average to 0.4.
  std::vector<RankedList> five{ranked("q1", {"a", "b", "c", "d", "e"}),
                               ranked("q2", {"a", "b", "c", "d", "e"})};
  LabelSet l5;
  l5.set("q1", "a", {1.0, true});
  for (const char *i : {"a", "b", "c"}) l5.set("q2", i, {1.0, true});
  std::vector<ObjectiveSpec> p5{spec("ctr", {{MetricKind::precision, 5}})};
  auto e = evaluate_objectives(five, std::vector<LabelSet>{l5}, p5);
  EXPECT_NEAR(e.aggregates[0], 0.4, 1e-15);
  EXPECT_EQ(e.query_ids, (std::vector<std::string>{"q1", "q2"}));
}

TEST(Evaluate, AverageOfMetricColumns) {
  // Three metric means averaged with equal weight, as in a published table row.
  const double mean = (0.7431 + 0.5950 + 0.5395) / 3.0;
  EXPECT_NEAR(mean, 0.6259, 1e-4);
}

TEST(Evaluate, MetricsAveragedWithinQueryThenAcross) {
  std::vector<RankedList> lists{ranked("q1", {"a", "b"}), ranked("q2", {"a", "b"})};
  LabelSet labels;
  labels.set("q1", "a", {1.0, true});
  labels.set("q1", "b", {1.0, true});
  labels.set("q2", "x", {0.0, false});
  // q2 has no positives: recall excludes it, precision admits it with 0.
  std::vector<ObjectiveSpec> specs{
      spec("ctr", {{MetricKind::precision, 2}, {MetricKind::recall, 2}})};
  auto e = evaluate_objectives(lists, std::vector<LabelSet>{labels}, specs);
  EXPECT_EQ(*e.per_query[0][0], 1.0);
  EXPECT_EQ(*e.per_query[0][1], 0.0);
  EXPECT_EQ(e.aggregates[0], 0.5);
  EXPECT_EQ(e.diagnostics[0].excluded_per_metric, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(*e.metric_means[0][0], 0.5);
  EXPECT_EQ(*e.metric_means[0][1], 1.0);
}

TEST(Evaluate, PermutationInvariant) {
  Rng rng(6);
  for (int round = 0; round < 30; ++round) {
    std::vector<RankedList> lists;
    LabelSet labels;
    for (int q = 0; q < 12; ++q) {
      const std::string qid = "q" + std::to_string(q);
      std::vector<std::string> items;
      for (int i = 0; i < 8; ++i) {
        items.push_back("i" + std::to_string(rng.below(20)));
        const double g = rng.uniform();
        labels.set(qid, "i" + std::to_string(rng.below(20)), {g, g > 0.6});
      }
      std::sort(items.begin(), items.end());
      items.erase(std::unique(items.begin(), items.end()), items.end());
      std::shuffle(items.begin(), items.end(), rng.engine());
      lists.push_back(ranked(qid, items));
    }
    std::vector<ObjectiveSpec> specs{
        spec("a", {{MetricKind::ndcg, 5}, {MetricKind::map, 5}}),
        spec("b", {{MetricKind::precision, 3}, {MetricKind::recall, 8}})};
    std::vector<LabelSet> ls{labels, labels};
    auto base = evaluate_objectives(lists, ls, specs);
    std::shuffle(lists.begin(), lists.end(), rng.engine());
    auto shuffled = evaluate_objectives(lists, ls, specs);
    EXPECT_EQ(base.aggregates, shuffled.aggregates);
    EXPECT_EQ(base.per_query, shuffled.per_query);
  }
}

TEST(Evaluate, Errors) {
  std::vector<RankedList> lists{ranked("q1", {"a"})};
  std::vector<ObjectiveSpec> specs{spec("ctcvr", {{MetricKind::recall, 5}})};
  try {
    evaluate_objectives(lists, std::vector<LabelSet>{LabelSet{}}, specs);
    FAIL() << "expected StudyError";
  } catch (const StudyError &e) {
    EXPECT_NE(std::string(e.what()).find("ctcvr"), std::string::npos);
  }
  std::vector<RankedList> dup{ranked("q1", {"a"}), ranked("q1", {"b"})};
  EXPECT_THROW(evaluate_objectives(dup, std::vector<LabelSet>{LabelSet{}}, specs),
               std::invalid_argument);
  EXPECT_THROW(evaluate_objectives(lists, std::vector<LabelSet>{}, specs), std::invalid_argument);
}

TEST(ObjectiveSpecs, Validation) {
  auto s = spec("ctr", {{MetricKind::ndcg, 10}});
  EXPECT_NO_THROW(validate(s));
  auto bad = s;
  bad.min_impressions = -1;
  EXPECT_THROW(validate(bad), ConfigError);
  bad = s;
  bad.smoothing = Smoothing{0.0, 1.0};
  EXPECT_THROW(validate(bad), ConfigError);
  bad = s;
  bad.positive_threshold = 1.5;
  EXPECT_THROW(validate(bad), ConfigError);
  bad = s;
  bad.metrics.clear();
  EXPECT_THROW(validate(bad), ConfigError);
  bad = s;
  bad.name.clear();
  EXPECT_THROW(validate(bad), ConfigError);
}

TEST(InteractionLogs, Validation) {
  InteractionLog log;
  EXPECT_THROW(log.add("q", "i", {10, 11, 0, 0}), DataError);
  EXPECT_THROW(log.add("q", "i", {10, 0, 0, 11}), DataError);
  EXPECT_THROW(log.add("q", "i", {-1, 0, 0, 0}), DataError);
  // carts above clicks is allowed.
  EXPECT_NO_THROW(log.add("q", "i", {10, 1, 5, 0}));
  EXPECT_THROW(log.add("q", "i", {10, 1, 1, 0}), DataError);
}

TEST(InteractionLogs, CsvRoundTrip) {
  Rng rng(8);
  InteractionLog log;
  for (int q = 0; q < 5; ++q) {
    for (int i = 0; i < 7; ++i) {
      const auto imp = static_cast<std::int64_t>(rng.below(1000));
      auto part = [&] { return static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(imp) + 1)); };
      log.add("q" + std::to_string(q), "i" + std::to_string(i), {imp, part(), part(), part()});
    }
  }
  std::stringstream buf;
  write_log_csv(buf, log);
  EXPECT_EQ(buf.str().substr(0, buf.str().find('\n')),
            "query_id,item_id,impressions,clicks,carts,purchases");
  const auto back = read_log_csv(buf);
  EXPECT_EQ(back.rows(), log.rows());
  EXPECT_EQ(back.query_ids().size(), 5u);

  std::stringstream bad("query_id,item_id,impressions,clicks,carts,purchases\nq,i,5,x,0,0\n");
  EXPECT_THROW(read_log_csv(bad), DataError);
  std::stringstream header("q,i,1,0,0,0\n");
  EXPECT_THROW(read_log_csv(header), DataError);
}
