// Copyright 2026 The GAR Authors
// Licensed under the Apache License, Version 2.0

#include "gar/fusion.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "gar/error.h"

namespace gar {
namespace {

double sorted_sum(std::vector<double>& terms) {
  std::sort(terms.begin(), terms.end());
  double total = 0.0;
  for (double t : terms) total += t;
  return total;
}

}  // namespace

std::string_view normalization_name(Normalization n) {
  switch (n) {
    case Normalization::kMinMax: return "minmax";
    case Normalization::kNone: return "none";
    case Normalization::kRank: return "rank";
  }
  return "unknown";
}

Normalization parse_normalization(std::string_view name) {
  for (auto n : {Normalization::kMinMax, Normalization::kNone, Normalization::kRank}) {
    if (normalization_name(n) == name) return n;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown normalization '" + std::string(name) + "'");
}

FusionSpec equal_weights(std::size_t n_lists, Normalization normalization, std::size_t cutoff) {
  FusionSpec spec;
  spec.weights.assign(n_lists, 1.0);
  spec.normalization = normalization;
  spec.cutoff = cutoff;
  return spec;
}

void validate(const FusionSpec& spec, std::size_t n_lists) {
  if (spec.weights.size() != n_lists) {
    throw Error(ErrorCode::kInvalidArgument,
                "weights count " + std::to_string(spec.weights.size()) +
                    " does not match list count " + std::to_string(n_lists));
  }
  bool any_positive = false;
  for (double w : spec.weights) {
    if (!std::isfinite(w) || w < 0.0) {
      throw Error(ErrorCode::kInvalidArgument, "weights must be finite and non-negative");
    }
    any_positive = any_positive || w > 0.0;
  }
  if (!any_positive) throw Error(ErrorCode::kInvalidArgument, "at least one weight must be positive");
  if (!std::isfinite(spec.missing_score)) {
    throw Error(ErrorCode::kInvalidArgument, "missing_score must be finite");
  }
}

ScoredList normalize_scores(const ScoredList& list, Normalization normalization) {
  ScoredList out = list;
  if (normalization == Normalization::kNone) return out;
  if (list.entries.empty()) {
    throw Error(ErrorCode::kEmptyList, "cannot normalize an empty list (topic " +
                                           std::to_string(list.topic_id) + ")");
  }
  if (normalization == Normalization::kRank) {
    for (std::size_t p = 0; p < out.entries.size(); ++p) {
      out.entries[p].score = 1.0 / (kRankConstant + static_cast<double>(p + 1));
    }
    return out;
  }
  const auto [lo, hi] = std::minmax_element(
      list.entries.begin(), list.entries.end(),
      [](const ScoredEntry& a, const ScoredEntry& b) { return a.score < b.score; });
  const double min = lo->score;
  const double range = hi->score - min;
  for (auto& e : out.entries) e.score = range > 0.0 ? (e.score - min) / range : 1.0;
  return out;
}

ScoredList fuse(const std::vector<ScoredList>& lists, const FusionSpec& spec) {
  if (lists.empty()) throw Error(ErrorCode::kNoLists, "fuse needs at least one list");
  validate(spec, lists.size());
  const int topic = lists.front().topic_id;
  for (const auto& l : lists) {
    if (l.topic_id != topic) {
      throw Error(ErrorCode::kTopicMismatch, "topics " + std::to_string(topic) + " and " +
                                                 std::to_string(l.topic_id));
    }
  }

  auto sorted_weights = spec.weights;
  const double weight_total = sorted_sum(sorted_weights);
  std::vector<double> share(spec.weights.size());
  for (std::size_t i = 0; i < share.size(); ++i) share[i] = spec.weights[i] / weight_total;

  // doc -> per-list normalized score (NaN marks absence)
  std::unordered_map<std::string, std::vector<double>> table;
  std::vector<std::string> docs;
  for (std::size_t i = 0; i < lists.size(); ++i) {
    if (lists[i].entries.empty()) continue;
    const auto normalized = normalize_scores(lists[i], spec.normalization);
    for (const auto& e : normalized.entries) {
      auto [it, inserted] = table.try_emplace(e.shot_id);
      if (inserted) {
        it->second.assign(lists.size(), std::nan(""));
        docs.push_back(e.shot_id);
      }
      if (!std::isnan(it->second[i])) {
        throw Error(ErrorCode::kInvalidArgument, "duplicate shot '" + e.shot_id + "' in list " +
                                                     std::to_string(i));
      }
      it->second[i] = e.score;
    }
  }

  ScoredList out;
  out.topic_id = topic;
  out.source_tag = "fused";
  out.entries.reserve(docs.size());
  std::vector<double> terms(lists.size());
  for (const auto& doc : docs) {
    const auto& scores = table[doc];
    for (std::size_t i = 0; i < lists.size(); ++i) {
      const double s = std::isnan(scores[i]) ? spec.missing_score : scores[i];
      terms[i] = share[i] * s;
    }
    out.entries.push_back({doc, sorted_sum(terms)});
  }
  const std::size_t keep = std::min(spec.cutoff, out.entries.size());
  std::partial_sort(out.entries.begin(), out.entries.begin() + static_cast<std::ptrdiff_t>(keep),
                    out.entries.end(), ranks_before);
  out.entries.resize(keep);
  return out;
}

Run fuse_runs(const std::vector<Run>& runs, const FusionSpec& spec, std::string tag) {
  if (runs.empty()) throw Error(ErrorCode::kNoRuns, "fuse_runs needs at least one run");
  validate(spec, runs.size());
  std::set<int> topics;
  for (const auto& r : runs) {
    for (const auto& [topic, list] : r.lists) topics.insert(topic);
  }
  Run out;
  out.tag = std::move(tag);
  for (int topic : topics) {
    std::vector<ScoredList> present;
    FusionSpec sub = spec;
    sub.weights.clear();
    for (std::size_t i = 0; i < runs.size(); ++i) {
      auto it = runs[i].lists.find(topic);
      if (it == runs[i].lists.end()) continue;
      present.push_back(it->second);
      present.back().topic_id = topic;
      sub.weights.push_back(spec.weights[i]);
    }
    if (std::none_of(sub.weights.begin(), sub.weights.end(), [](double w) { return w > 0.0; })) {
      throw Error(ErrorCode::kInvalidArgument,
                  "topic " + std::to_string(topic) + " only appears in zero-weight runs");
    }
    auto fused = fuse(present, sub);
    fused.source_tag = out.tag;
    out.lists.emplace(topic, std::move(fused));
  }
  return out;
}

RankOverlap rank_overlap(const ScoredList& a, const ScoredList& b, std::size_t depth) {
  if (depth == 0) throw Error(ErrorCode::kInvalidArgument, "depth must be >= 1");
  const std::size_t effective = std::min(depth, std::max(a.size(), b.size()));
  if (effective == 0) return {1.0, 0};
  std::unordered_set<std::string> top_a;
  for (std::size_t i = 0; i < std::min(effective, a.size()); ++i) top_a.insert(a.entries[i].shot_id);
  std::size_t shared = 0;
  for (std::size_t i = 0; i < std::min(effective, b.size()); ++i) {
    shared += top_a.count(b.entries[i].shot_id);
  }
  return {static_cast<double>(shared) / static_cast<double>(effective), effective};
}

}  // namespace gar
