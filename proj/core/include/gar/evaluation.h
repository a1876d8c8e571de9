// Copyright 2026 The GAR Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "gar/scored_list.h"
#include "gar/trec_io.h"

namespace gar {

struct EvalConfig {
  double epsilon = 1e-5;
};

void validate(const EvalConfig& cfg);

// Stratified-sampling counts for one topic.
class TopicJudgmentView {
 public:
  struct StratumCounts {
    std::size_t pool = 0;      // N_s
    std::size_t sampled = 0;   // m_s
    std::size_t relevant = 0;  // r_s
  };
  struct DocJudgment {
    std::size_t stratum = 0;
    int judgment = kUnsampled;
  };

  explicit TopicJudgmentView(const TopicQrels& qrels);

  const std::vector<StratumCounts>& strata() const { return strata_; }
  // Null for documents outside every pool.
  const DocJudgment* find(const std::string& doc) const;

  // Estimated number of relevant documents, sum_s r_s * N_s / m_s. Strata
  // without sampled documents contribute 0.
  double estimated_relevant() const;
  std::size_t unsampled_strata() const;

 private:
  std::vector<StratumCounts> strata_;
  std::unordered_map<std::string, DocJudgment> docs_;
};

// Classic AP with full judgments: judgment >= 1 is relevant, R counts the
// relevant documents in `judgments`. 0 when R = 0.
double average_precision(const ScoredList& list,
                         const std::unordered_map<std::string, int>& judgments);
double average_precision(const ScoredList& list, const TopicQrels& qrels);

// Extended inferred AP over stratified sampled judgments. For each rank k
// holding a sampled relevant document from stratum s*:
//   E[P@1] = 1
//   E[P@k] = 1/k + ((k-1)/k) * sum_s (c_sk/(k-1)) * (r_sk + eps)/(m_sk + 2 eps)
// where c_sk, m_sk, r_sk count the pooled, sampled and sampled-relevant
// documents of stratum s above rank k. Unpooled documents only advance k.
//   xinfAP = (1/R̂) * sum_k (N_s*/m_s*) * E[P@k],  0 when R̂ = 0.
double xinf_ap(const ScoredList& list, const TopicJudgmentView& view,
               const EvalConfig& cfg = {});

struct EvalReport {
  std::string run_tag;
  std::string metric = "xinfAP";
  std::map<int, double> per_topic;  // every qrels topic, missing ones as 0
  double mean = 0.0;
  std::vector<int> missing_topics;
  std::vector<std::string> warnings;
  std::uint64_t qrels_digest = 0;
};

enum class Metric { kXinfAP, kAP };

// Scores every qrels topic; topics absent from the run score 0 and are
// listed. Throws InvalidArgument on empty qrels.
EvalReport evaluate_run(const Run& run, const StratifiedQrels& qrels,
                        const EvalConfig& cfg = {}, Metric metric = Metric::kXinfAP);

// Identifies the qrels a report was computed against.
std::uint64_t qrels_digest(const StratifiedQrels& qrels);

// `topic<TAB>metric<TAB>value` rows: an `all runid <tag>` header, one row per
// topic, then `mean<TAB>metric<TAB>value`. Values use six decimals.
std::string render_report_tsv(const EvalReport& report);
std::string render_report_json(const EvalReport& report);

struct RunComparison {
  struct Row {
    std::string run_tag;
    double mean = 0.0;
    std::map<int, double> delta_vs_best;  // per topic, this run minus the top run
  };
  std::vector<Row> rows;                   // mean descending, ties by tag
  std::vector<std::vector<double>> overlap;  // rows x rows, mean rank_overlap over topics
  std::size_t depth = 0;
};

// `reports[i]` must describe `runs[i]`; all reports must share qrels
// (QrelsMismatch otherwise). Needs at least two reports.
RunComparison compare_runs(const std::vector<EvalReport>& reports, const std::vector<Run>& runs,
                           std::size_t depth = 1000);

std::string render_comparison_tsv(const RunComparison& comparison);

}  // namespace gar
