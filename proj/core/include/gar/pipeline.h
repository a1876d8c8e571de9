// Copyright 2026 The GAR Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "gar/concept_bank.h"
#include "gar/embedding_index.h"
#include "gar/fusion.h"
#include "gar/generation.h"
#include "gar/scored_list.h"

namespace gar {

struct PipelineConfig {
  GeneratorConfig generator;
  FusionSpec fusion;  // only normalization is used: channels fuse with equal weights, cutoff k
  std::size_t k = kDefaultCutoff;
  std::set<Channel> channels{Channel::kOriginal, Channel::kT2T, Channel::kT2I, Channel::kI2T};
  std::shared_ptr<const EmbeddingStore> store;
  std::shared_ptr<const ConceptBank> bank;  // optional
  std::string run_tag;
};

// Embeds `text` and searches the store. The list is tagged `channel`.
// Throws VariantSearchFailed on empty text or embedder/search errors.
ScoredList search_text_variant(const std::string& text, const EmbeddingStore& store,
                               std::size_t k, Embedder& embedder,
                               std::string_view channel = "original", int topic_id = 0);

// Searches each image separately; several lists are fused with equal
// weights under `fusion` (cutoff k), a single list is returned as is.
// Throws AllImagesFailed when no image produced a list.
ScoredList search_image_variant(const std::vector<GeneratedImage>& images,
                                const EmbeddingStore& store, std::size_t k, Embedder& embedder,
                                int topic_id = 0, const FusionSpec& fusion = {});

// Combines channel lists: one list is kept as is (truncated to k), several are
// fused with equal weights.
ScoredList combine_equal(std::vector<ScoredList> lists, const FusionSpec& fusion, std::size_t k,
                         std::string tag);

struct GarResult {
  Run fused;
  std::map<Channel, Run> channel_runs;
  std::vector<QueryVariantSet> variants;
  std::vector<std::string> warnings;
};

// Generates variants for every topic, retrieves one list per enabled channel
// and fuses them with equal weights. Failed channels drop out of that topic's
// fusion. Channel runs are tagged `<run_tag>.<channel>`.
GarResult run_gar(const std::vector<Topic>& topics, const PipelineConfig& cfg,
                  const GeneratorClients& clients);

// Per-channel query lists for one variant set, shared by the pipeline and the
// service. Channels without queries are skipped; failures go to `warnings`.
std::map<Channel, ScoredList> search_variant_set(const QueryVariantSet& variants,
                                                 const std::set<Channel>& channels,
                                                 const EmbeddingStore& store, std::size_t k,
                                                 Embedder& embedder, const FusionSpec& fusion,
                                                 std::vector<std::string>& warnings);

}  // namespace gar
