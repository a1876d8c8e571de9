// Copyright 2026 The GAR Authors
// Licensed under the Apache License, Version 2.0

#include "gar/evaluation.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include <nlohmann/json.hpp>

#include "gar/error.h"
#include "gar/fusion.h"
#include "gar/hash.h"

namespace gar {
namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

void validate(const EvalConfig& cfg) {
  if (!(cfg.epsilon > 0.0) || !std::isfinite(cfg.epsilon)) {
    throw Error(ErrorCode::kInvalidArgument, "epsilon must be positive");
  }
}

TopicJudgmentView::TopicJudgmentView(const TopicQrels& qrels) {
  strata_.reserve(qrels.strata.size());
  for (std::size_t s = 0; s < qrels.strata.size(); ++s) {
    const auto& stratum = qrels.strata[s];
    StratumCounts counts;
    for (const auto& e : stratum.entries) {
      ++counts.pool;
      if (e.judgment >= 0) ++counts.sampled;
      if (e.judgment >= 1) ++counts.relevant;
      docs_.emplace(e.doc_id, DocJudgment{s, e.judgment});
    }
    strata_.push_back(counts);
  }
}

const TopicJudgmentView::DocJudgment* TopicJudgmentView::find(const std::string& doc) const {
  auto it = docs_.find(doc);
  return it == docs_.end() ? nullptr : &it->second;
}

double TopicJudgmentView::estimated_relevant() const {
  double total = 0.0;
  for (const auto& s : strata_) {
    if (s.sampled == 0) continue;
    total += static_cast<double>(s.relevant) * static_cast<double>(s.pool) /
             static_cast<double>(s.sampled);
  }
  return total;
}

std::size_t TopicJudgmentView::unsampled_strata() const {
  return static_cast<std::size_t>(
      std::count_if(strata_.begin(), strata_.end(), [](const StratumCounts& s) { return s.sampled == 0; }));
}

double average_precision(const ScoredList& list,
                         const std::unordered_map<std::string, int>& judgments) {
  std::size_t total_relevant = 0;
  for (const auto& [doc, j] : judgments) total_relevant += j >= 1 ? 1 : 0;
  if (total_relevant == 0) return 0.0;
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t k = 0; k < list.entries.size(); ++k) {
    auto it = judgments.find(list.entries[k].shot_id);
    if (it == judgments.end() || it->second < 1) continue;
    ++hits;
    sum += static_cast<double>(hits) / static_cast<double>(k + 1);
  }
  return sum / static_cast<double>(total_relevant);
}

double average_precision(const ScoredList& list, const TopicQrels& qrels) {
  std::unordered_map<std::string, int> judgments;
  for (const auto& [doc, where] : qrels.docs) judgments.emplace(doc, where.second);
  return average_precision(list, judgments);
}

double xinf_ap(const ScoredList& list, const TopicJudgmentView& view, const EvalConfig& cfg) {
  validate(cfg);
  const double r_hat = view.estimated_relevant();
  if (r_hat <= 0.0) return 0.0;
  const double eps = cfg.epsilon;
  const auto& strata = view.strata();

  // Counts over the documents ranked above the current one.
  std::vector<std::size_t> pooled_above(strata.size(), 0);
  std::vector<std::size_t> sampled_above(strata.size(), 0);
  std::vector<std::size_t> relevant_above(strata.size(), 0);

  double total = 0.0;
  for (std::size_t idx = 0; idx < list.entries.size(); ++idx) {
    const auto* judged = view.find(list.entries[idx].shot_id);
    if (judged != nullptr && judged->judgment >= 1) {
      const auto& home = strata[judged->stratum];
      const double k = static_cast<double>(idx + 1);
      double expected_precision = 1.0;
      if (idx > 0) {
        const double above = k - 1.0;
        double inner = 0.0;
        for (std::size_t s = 0; s < strata.size(); ++s) {
          if (pooled_above[s] == 0) continue;
          inner += (static_cast<double>(pooled_above[s]) / above) *
                   ((static_cast<double>(relevant_above[s]) + eps) /
                    (static_cast<double>(sampled_above[s]) + 2.0 * eps));
        }
        expected_precision = 1.0 / k + (above / k) * inner;
      }
      total += (static_cast<double>(home.pool) / static_cast<double>(home.sampled)) *
               expected_precision;
    }
    if (judged != nullptr) {
      ++pooled_above[judged->stratum];
      if (judged->judgment >= 0) ++sampled_above[judged->stratum];
      if (judged->judgment >= 1) ++relevant_above[judged->stratum];
    }
  }
  return total / r_hat;
}

std::uint64_t qrels_digest(const StratifiedQrels& qrels) { return fnv1a64(write_qrels(qrels)); }

EvalReport evaluate_run(const Run& run, const StratifiedQrels& qrels, const EvalConfig& cfg,
                        Metric metric) {
  validate(cfg);
  if (qrels.empty()) throw Error(ErrorCode::kInvalidArgument, "qrels has no topics");
  EvalReport report;
  report.run_tag = run.tag;
  report.metric = metric == Metric::kXinfAP ? "xinfAP" : "AP";
  report.qrels_digest = qrels_digest(qrels);
  double sum = 0.0;
  for (const auto& [topic, tq] : qrels.topics) {
    auto it = run.lists.find(topic);
    double value = 0.0;
    if (it == run.lists.end()) {
      report.missing_topics.push_back(topic);
    } else if (metric == Metric::kXinfAP) {
      const TopicJudgmentView view(tq);
      if (view.unsampled_strata() > 0) {
        report.warnings.push_back("topic " + std::to_string(topic) + ": " +
                                  std::to_string(view.unsampled_strata()) +
                                  " stratum/strata without sampled documents");
      }
      value = xinf_ap(it->second, view, cfg);
    } else {
      value = average_precision(it->second, tq);
    }
    report.per_topic[topic] = value;
    sum += value;
  }
  report.mean = sum / static_cast<double>(qrels.topics.size());
  return report;
}

std::string render_report_tsv(const EvalReport& report) {
  std::string out = "all\trunid\t" + report.run_tag + "\n";
  for (const auto& [topic, value] : report.per_topic) {
    out += std::to_string(topic) + "\t" + report.metric + "\t" + fixed6(value) + "\n";
  }
  out += "mean\t" + report.metric + "\t" + fixed6(report.mean) + "\n";
  return out;
}

std::string render_report_json(const EvalReport& report) {
  nlohmann::ordered_json doc;
  doc["run_tag"] = report.run_tag;
  doc["metric"] = report.metric;
  nlohmann::ordered_json per_topic = nlohmann::ordered_json::object();
  for (const auto& [topic, value] : report.per_topic) per_topic[std::to_string(topic)] = value;
  doc["per_topic"] = per_topic;
  doc["mean"] = report.mean;
  doc["missing_topics"] = report.missing_topics;
  doc["warnings"] = report.warnings;
  return doc.dump(2) + "\n";
}

RunComparison compare_runs(const std::vector<EvalReport>& reports, const std::vector<Run>& runs,
                           std::size_t depth) {
  if (reports.size() < 2) throw Error(ErrorCode::kInvalidArgument, "compare needs at least two runs");
  if (reports.size() != runs.size()) {
    throw Error(ErrorCode::kInvalidArgument, "reports and runs differ in count");
  }
  for (const auto& r : reports) {
    if (r.qrels_digest != reports.front().qrels_digest || r.per_topic.size() != reports.front().per_topic.size()) {
      throw Error(ErrorCode::kQrelsMismatch, "reports '" + reports.front().run_tag + "' and '" +
                                                 r.run_tag + "' use different qrels");
    }
  }

  std::vector<std::size_t> order(reports.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (reports[a].mean != reports[b].mean) return reports[a].mean > reports[b].mean;
    return reports[a].run_tag < reports[b].run_tag;
  });

  RunComparison out;
  out.depth = depth;
  const auto& best = reports[order.front()];
  for (std::size_t i : order) {
    RunComparison::Row row;
    row.run_tag = reports[i].run_tag;
    row.mean = reports[i].mean;
    for (const auto& [topic, value] : reports[i].per_topic) {
      row.delta_vs_best[topic] = value - best.per_topic.at(topic);
    }
    out.rows.push_back(std::move(row));
  }

  const ScoredList empty;
  auto list_for = [&](const Run& run, int topic) -> const ScoredList& {
    auto it = run.lists.find(topic);
    return it == run.lists.end() ? empty : it->second;
  };
  const std::size_t n = order.size();
  out.overlap.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      double sum = 0.0;
      for (const auto& [topic, value] : best.per_topic) {
        sum += rank_overlap(list_for(runs[order[a]], topic), list_for(runs[order[b]], topic), depth)
                   .overlap;
      }
      out.overlap[a][b] = sum / static_cast<double>(best.per_topic.size());
    }
  }
  return out;
}

std::string render_comparison_tsv(const RunComparison& comparison) {
  std::string out = "rank\trun\tmean\n";
  for (std::size_t i = 0; i < comparison.rows.size(); ++i) {
    out += std::to_string(i + 1) + "\t" + comparison.rows[i].run_tag + "\t" +
           fixed6(comparison.rows[i].mean) + "\n";
  }
  out += "\noverlap@" + std::to_string(comparison.depth);
  for (const auto& row : comparison.rows) out += "\t" + row.run_tag;
  out += "\n";
  for (std::size_t a = 0; a < comparison.rows.size(); ++a) {
    out += comparison.rows[a].run_tag;
    for (double v : comparison.overlap[a]) out += "\t" + fixed6(v);
    out += "\n";
  }
  out += "\ndelta_vs_best\ttopic";
  for (const auto& row : comparison.rows) out += "\t" + row.run_tag;
  out += "\n";
  if (!comparison.rows.empty()) {
    for (const auto& [topic, unused] : comparison.rows.front().delta_vs_best) {
      out += "delta\t" + std::to_string(topic);
      for (const auto& row : comparison.rows) out += "\t" + fixed6(row.delta_vs_best.at(topic));
      out += "\n";
    }
  }
  return out;
}

}  // namespace gar
