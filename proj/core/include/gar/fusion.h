// Copyright 2026 The GAR Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "gar/scored_list.h"

namespace gar {

enum class Normalization { kMinMax, kNone, kRank };

inline constexpr double kRankConstant = 60.0;
inline constexpr std::size_t kDefaultCutoff = 1000;

std::string_view normalization_name(Normalization n);
Normalization parse_normalization(std::string_view name);

struct FusionSpec {
  std::vector<double> weights;  // one per input list, >= 0, at least one > 0
  Normalization normalization = Normalization::kMinMax;
  std::size_t cutoff = kDefaultCutoff;
  double missing_score = 0.0;
};

FusionSpec equal_weights(std::size_t n_lists, Normalization normalization = Normalization::kMinMax,
                         std::size_t cutoff = kDefaultCutoff);

// Throws InvalidArgument on a weight-count mismatch, negative or non-finite
// weights, or all-zero weights.
void validate(const FusionSpec& spec, std::size_t n_lists);

// minmax: max -> 1, min -> 0, constant list -> all 1. rank: 1-based position
// p -> 1/(60 + p). none: identity. Order is unchanged. minmax and rank throw
// EmptyList on empty input.
ScoredList normalize_scores(const ScoredList& list, Normalization normalization);

// Weighted linear combination of normalized lists:
//   fused(d) = sum_i w_i * s_i(d) / sum_i w_i,  s_i(d) = missing_score if absent.
// Each document's terms are summed in ascending order so the result does not
// depend on input order. Output is canonical and truncated to spec.cutoff.
ScoredList fuse(const std::vector<ScoredList>& lists, const FusionSpec& spec);

// Per-topic fuse over the runs that have the topic, using their weights
// (renormalized over the present runs). Every topic of every input appears.
Run fuse_runs(const std::vector<Run>& runs, const FusionSpec& spec, std::string tag);

struct RankOverlap {
  double overlap = 0.0;
  std::size_t effective_depth = 0;
};

// |top-d(a) ∩ top-d(b)| / d where d = min(depth, max(|a|, |b|)). Two empty
// lists are identical and score 1.
RankOverlap rank_overlap(const ScoredList& a, const ScoredList& b, std::size_t depth);

}  // namespace gar
