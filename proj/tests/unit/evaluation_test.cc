// Copyright 2026 The GAR Authors
// Licensed under the Apache License, Version 2.0

#include "gar/evaluation.h"

#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "gar/error.h"
#include "oracles.h"

namespace gar {
namespace {

ScoredList ranked(int topic, const std::vector<std::string>& ids) {
  ScoredList l{topic, {}, "t"};
  for (std::size_t i = 0; i < ids.size(); ++i) {
    l.entries.push_back({ids[i], static_cast<double>(ids.size() - i)});
  }
  return l;
}

std::vector<std::string> ids_of(const ScoredList& l) {
  std::vector<std::string> out;
  for (const auto& e : l.entries) out.push_back(e.shot_id);
  return out;
}

const TopicQrels& topic_of(const StratifiedQrels& q, int topic) { return q.topics.at(topic); }

TEST(AveragePrecision, HandComputed) {
  const auto l = ranked(1, {"d1", "d2", "d3"});
  const std::unordered_map<std::string, int> j{{"d1", 1}, {"d2", 0}, {"d3", 1}};
  EXPECT_NEAR(average_precision(l, j), 0.833333333, 1e-9);
  EXPECT_DOUBLE_EQ(average_precision(l, {{"d2", 0}}), 0.0);
  EXPECT_DOUBLE_EQ(average_precision(l, {{"d1", 1}, {"d9", 1}}), 0.5);
}

TEST(XinfAP, FullJudgmentExample) {
  const auto q = parse_qrels("1 s d1 1\n1 s d2 0\n1 s d3 1\n");
  const TopicJudgmentView view(topic_of(q, 1));
  EXPECT_NEAR(xinf_ap(ranked(1, {"d1", "d2", "d3"}), view), 0.83333, 1e-4);
}

TEST(XinfAP, SampledStratumExample) {
  const auto q = parse_qrels("1 s d1 1\n1 s d2 -1\n1 s d3 0\n1 s d4 -1\n");
  const TopicJudgmentView view(topic_of(q, 1));
  EXPECT_DOUBLE_EQ(view.estimated_relevant(), 2.0);
  EXPECT_DOUBLE_EQ(xinf_ap(ranked(1, {"d1", "d2", "d3", "d4"}), view), 1.0);
}

TEST(XinfAP, NoSampledRelevantIsZero) {
  const auto q = parse_qrels("1 s d1 0\n1 s d2 -1\n1 s d3 1\n");
  const TopicJudgmentView view(topic_of(q, 1));
  EXPECT_DOUBLE_EQ(xinf_ap(ranked(1, {"d1", "d2", "x"}), view), 0.0);
  const auto none = parse_qrels("1 s d1 0\n");
  EXPECT_DOUBLE_EQ(xinf_ap(ranked(1, {"d1"}), TopicJudgmentView(topic_of(none, 1))), 0.0);
}

TEST(XinfAP, UnpooledDocsOnlyAdvanceRank) {
  const auto q = parse_qrels("1 s d1 1\n1 s d3 1\n");
  const TopicJudgmentView view(topic_of(q, 1));
  // k=1: 1; k=3: 1/3 + (2/3)*(1/2)*(1+e)/(1+2e) ~ 2/3
  EXPECT_NEAR(xinf_ap(ranked(1, {"d1", "u", "d3"}), view), (1.0 + 2.0 / 3) / 2, 1e-5);
  EXPECT_NEAR(xinf_ap(ranked(1, {"d1", "u", "d3"}), view),
              testing::oracle_xinf_ap({"d1", "u", "d3"}, topic_of(q, 1)), 1e-12);
}

TEST(XinfAP, EmptyStratumWarnsThroughUnsampledCount) {
  const auto q = parse_qrels("1 a d1 1\n1 b d2 -1\n1 b d3 -1\n");
  const TopicJudgmentView view(topic_of(q, 1));
  EXPECT_EQ(view.unsampled_strata(), 1u);
  EXPECT_DOUBLE_EQ(view.estimated_relevant(), 1.0);
  const auto report = evaluate_run(gar::Run{"r", {{1, ranked(1, {"d1"})}}}, q);
  EXPECT_FALSE(report.warnings.empty());
}

StratifiedQrels random_qrels(std::mt19937_64& rng, std::size_t pool, bool full) {
  std::string text;
  for (std::size_t i = 0; i < pool; ++i) {
    const int stratum = full ? 1 : 1 + static_cast<int>(rng() % 3);
    int judgment = static_cast<int>(rng() % 3) - 1;
    if (full && judgment < 0) judgment = static_cast<int>(rng() % 2);
    text += "7 " + std::to_string(stratum) + " d" + std::to_string(i) + " " +
            std::to_string(judgment) + "\n";
  }
  return parse_qrels(text);
}

TEST(XinfAPProperties, FullJudgmentLimitAndOracle) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const bool full = trial % 2 == 0;
    const auto q = random_qrels(rng, 5 + rng() % 30, full);
    const auto& tq = topic_of(q, 7);
    const TopicJudgmentView view(tq);
    const auto list = testing::random_list(rng, 7, 40, 45, false);
    const double x = xinf_ap(list, view);
    EXPECT_NEAR(x, testing::oracle_xinf_ap(ids_of(list), tq), 1e-9);
    if (full) EXPECT_NEAR(x, average_precision(list, tq), 10 * 1e-5);

    double bound = 0.0;
    for (const auto& s : view.strata()) {
      if (s.sampled > 0) bound = std::max(bound, static_cast<double>(s.pool) / s.sampled);
    }
    EXPECT_GE(x, 0.0);
    EXPECT_LE(x, std::max(1.0, bound) + 1e-9);
  }
}

TEST(XinfAPProperties, SwapRelevantUpNeverDecreases) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const auto q = random_qrels(rng, 30, false);
    const auto& tq = topic_of(q, 7);
    const TopicJudgmentView view(tq);
    auto order = ids_of(testing::random_list(rng, 7, 30, 35, false));
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
      const auto* a = view.find(order[i]);
      const auto* b = view.find(order[i + 1]);
      if (!a || !b || a->judgment != 0 || b->judgment < 1) continue;
      const double before = xinf_ap(ranked(7, order), view);
      std::swap(order[i], order[i + 1]);
      EXPECT_GE(xinf_ap(ranked(7, order), view), before - 1e-12);
      break;
    }
  }
}

TEST(EvaluateRun, MeanWithMissingTopic) {
  const auto q = parse_qrels("1 s a 1\n2 s b 1\n");
  gar::Run run{"r", {{1, ranked(1, {"a"})}}};
  const auto report = evaluate_run(run, q, {}, Metric::kAP);
  EXPECT_DOUBLE_EQ(report.per_topic.at(1), 1.0);
  EXPECT_DOUBLE_EQ(report.per_topic.at(2), 0.0);
  EXPECT_DOUBLE_EQ(report.mean, 0.5);
  EXPECT_EQ(report.missing_topics, std::vector<int>{2});
}

TEST(EvaluateRun, MeanOfTwoTopics) {
  // AP 1/2 for topic 1 (relevant doc at rank 2, R=1) and 1/3 for topic 2.
  const auto q = parse_qrels("1 s a 1\n2 s b 1\n");
  gar::Run run{"r", {{1, ranked(1, {"x", "a"})}, {2, ranked(2, {"x", "y", "b"})}}};
  const auto report = evaluate_run(run, q);
  EXPECT_NEAR(report.mean, (0.5 + 1.0 / 3) / 2, 1e-5);
  EXPECT_THROW(evaluate_run(run, StratifiedQrels{}), Error);
}

TEST(EvaluateRun, TsvLayout) {
  std::string qrels;
  for (int t = 751; t <= 770; ++t) qrels += std::to_string(t) + " s d 1\n";
  gar::Run run{"Run1", {}};
  for (int t = 751; t <= 770; ++t) run.lists[t] = ranked(t, {"d"});
  const auto tsv = render_report_tsv(evaluate_run(run, parse_qrels(qrels)));
  std::vector<std::string> lines;
  std::size_t start = 0;
  for (auto pos = tsv.find('\n'); pos != std::string::npos; pos = tsv.find('\n', start)) {
    lines.push_back(tsv.substr(start, pos - start));
    start = pos + 1;
  }
  ASSERT_EQ(lines.size(), 22u);
  EXPECT_EQ(lines.front(), "all\trunid\tRun1");
  EXPECT_EQ(lines[1], "751\txinfAP\t1.000000");
  EXPECT_EQ(lines.back(), "mean\txinfAP\t1.000000");
}

TEST(CompareRuns, OrderDeltasOverlap) {
  const auto q = parse_qrels("1 s a 1\n");
  const std::vector<std::pair<std::string, double>> table{
      {"Run1", 0.294}, {"Run2", 0.283}, {"Run4", 0.277}, {"Run3", 0.277}, {"Novelty", 0.216}};
  std::vector<EvalReport> reports;
  std::vector<gar::Run> runs;
  for (const auto& [tag, mean] : table) {
    EvalReport r;
    r.run_tag = tag;
    r.mean = mean;
    r.per_topic[1] = mean;
    r.qrels_digest = qrels_digest(q);
    reports.push_back(r);
    runs.push_back(gar::Run{tag, {{1, ranked(1, {tag + "_x"})}}});
  }
  const auto cmp = compare_runs(reports, runs);
  std::vector<std::string> order;
  for (const auto& row : cmp.rows) order.push_back(row.run_tag);
  EXPECT_EQ(order, (std::vector<std::string>{"Run1", "Run2", "Run3", "Run4", "Novelty"}));
  EXPECT_NEAR(cmp.rows[4].delta_vs_best.at(1), 0.216 - 0.294, 1e-12);
  EXPECT_DOUBLE_EQ(cmp.overlap[0][0], 1.0);
  EXPECT_DOUBLE_EQ(cmp.overlap[0][1], 0.0);

  reports[1].qrels_digest ^= 1;
  try {
    compare_runs(reports, runs);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kQrelsMismatch);
  }
}

TEST(CompareRuns, IdenticalRunsZeroDeltaFullOverlap) {
  const auto q = parse_qrels("1 s a 1\n1 s b 0\n");
  gar::Run run{"A", {{1, ranked(1, {"b", "a"})}}};
  gar::Run copy = run;
  copy.tag = "B";
  const auto cmp = compare_runs({evaluate_run(run, q), evaluate_run(copy, q)}, {run, copy});
  EXPECT_DOUBLE_EQ(cmp.rows[1].delta_vs_best.at(1), 0.0);
  EXPECT_DOUBLE_EQ(cmp.overlap[0][1], 1.0);
  EXPECT_THROW(compare_runs({evaluate_run(run, q)}, {run}), Error);
}

}  // namespace
}  // namespace gar
