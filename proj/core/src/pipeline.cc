// Copyright 2026 The GAR Authors
// Licensed under the Apache License, Version 2.0

#include "gar/pipeline.h"

#include <exception>

#include "gar/error.h"

namespace gar {
namespace {

ScoredList to_list(const std::vector<SearchHit>& hits, int topic_id, std::string tag) {
  ScoredList list;
  list.topic_id = topic_id;
  list.source_tag = std::move(tag);
  list.entries.reserve(hits.size());
  for (const auto& h : hits) list.entries.push_back({h.shot_id, static_cast<double>(h.score)});
  return list;
}

ScoredList search_texts(const std::vector<std::string>& texts, const EmbeddingStore& store,
                        std::size_t k, Embedder& embedder, std::string_view channel, int topic_id,
                        const FusionSpec& fusion) {
  std::vector<ScoredList> lists;
  std::string last_error;
  for (const auto& text : texts) {
    try {
      lists.push_back(search_text_variant(text, store, k, embedder, channel, topic_id));
    } catch (const Error& e) {
      last_error = e.what();
    }
  }
  if (lists.empty()) {
    throw Error(ErrorCode::kVariantSearchFailed, std::string(channel) + ": " + last_error);
  }
  return combine_equal(std::move(lists), fusion, k, std::string(channel));
}

}  // namespace

ScoredList search_text_variant(const std::string& text, const EmbeddingStore& store,
                               std::size_t k, Embedder& embedder, std::string_view channel,
                               int topic_id) {
  const std::string name(channel);
  if (trim(text).empty()) throw Error(ErrorCode::kVariantSearchFailed, name + ": empty text");
  if (k == 0) return to_list({}, topic_id, name);
  try {
    const auto vectors = embedder.embed_texts({text});
    if (vectors.size() != 1) throw Error(ErrorCode::kGeneratorFailed, "embedder returned wrong count");
    return to_list(knn_search(store, vectors.front(), k), topic_id, name);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::kVariantSearchFailed, name + ": " + e.what());
  }
}

ScoredList search_image_variant(const std::vector<GeneratedImage>& images,
                                const EmbeddingStore& store, std::size_t k, Embedder& embedder,
                                int topic_id, const FusionSpec& fusion) {
  if (images.empty()) throw Error(ErrorCode::kAllImagesFailed, "no images");
  if (k == 0) return to_list({}, topic_id, "t2i");
  std::vector<ScoredList> lists;
  std::string last_error;
  for (const auto& image : images) {
    try {
      const auto vectors = embedder.embed_images({image});
      if (vectors.size() != 1) throw Error(ErrorCode::kGeneratorFailed, "embedder returned wrong count");
      lists.push_back(to_list(knn_search(store, vectors.front(), k), topic_id, "t2i"));
    } catch (const std::exception& e) {
      last_error = e.what();
    }
  }
  if (lists.empty()) throw Error(ErrorCode::kAllImagesFailed, last_error);
  return combine_equal(std::move(lists), fusion, k, "t2i");
}

ScoredList combine_equal(std::vector<ScoredList> lists, const FusionSpec& fusion, std::size_t k,
                         std::string tag) {
  if (lists.empty()) throw Error(ErrorCode::kNoLists, "nothing to combine");
  ScoredList out;
  if (lists.size() == 1) {
    out = std::move(lists.front());
    if (out.entries.size() > k) out.entries.resize(k);
  } else {
    out = fuse(lists, equal_weights(lists.size(), fusion.normalization, k));
  }
  out.source_tag = std::move(tag);
  return out;
}

std::map<Channel, ScoredList> search_variant_set(const QueryVariantSet& variants,
                                                 const std::set<Channel>& channels,
                                                 const EmbeddingStore& store, std::size_t k,
                                                 Embedder& embedder, const FusionSpec& fusion,
                                                 std::vector<std::string>& warnings) {
  std::map<Channel, ScoredList> out;
  const int topic = variants.topic.topic_id;
  for (Channel channel : channels) {
    const auto name = channel_name(channel);
    try {
      switch (channel) {
        case Channel::kOriginal:
          out[channel] = search_text_variant(variants.topic.text, store, k, embedder, name, topic);
          break;
        case Channel::kT2T:
          if (variants.t2t_texts.empty()) continue;
          out[channel] = search_texts(variants.t2t_texts, store, k, embedder, name, topic, fusion);
          break;
        case Channel::kT2I:
          if (variants.t2i_images.empty()) continue;
          out[channel] = search_image_variant(variants.t2i_images, store, k, embedder, topic, fusion);
          break;
        case Channel::kI2T:
          if (variants.i2t_captions.empty()) continue;
          out[channel] = search_texts(variants.i2t_captions, store, k, embedder, name, topic, fusion);
          break;
      }
    } catch (const Error& e) {
      warnings.push_back("topic " + std::to_string(topic) + " " + std::string(name) + ": " + e.what());
    }
  }
  return out;
}

GarResult run_gar(const std::vector<Topic>& topics, const PipelineConfig& cfg,
                  const GeneratorClients& clients) {
  if (topics.empty()) throw Error(ErrorCode::kNoTopics, "no topics to run");
  if (!cfg.store) throw Error(ErrorCode::kStoreUnavailable, "no embedding store loaded");
  if (!is_valid_run_tag(cfg.run_tag)) {
    throw Error(ErrorCode::kInvalidArgument, "run tag must be non-empty without whitespace");
  }
  if (cfg.channels.empty()) throw Error(ErrorCode::kInvalidArgument, "no channels enabled");
  if (!clients.embedder) throw Error(ErrorCode::kInvalidArgument, "no embedder configured");

  GeneratorConfig gen = cfg.generator;
  gen.enable_t2t = cfg.channels.count(Channel::kT2T) != 0;
  gen.enable_t2i = cfg.channels.count(Channel::kT2I) != 0;
  gen.enable_i2t = cfg.channels.count(Channel::kI2T) != 0;

  GarResult result;
  result.fused.tag = cfg.run_tag;
  for (Channel c : cfg.channels) {
    result.channel_runs[c].tag = cfg.run_tag + "." + std::string(channel_name(c));
  }

  for (const auto& topic : topics) {
    QueryVariantSet variants;
    try {
      variants = generate_variants(topic, gen, clients, cfg.bank.get());
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kAllChannelsFailed) throw;
      variants.topic = topic;
      result.warnings.push_back(e.what());
    }
    for (const auto& w : variants.warnings) {
      result.warnings.push_back("topic " + std::to_string(topic.topic_id) + " " + w);
    }

    auto lists = search_variant_set(variants, cfg.channels, *cfg.store, cfg.k,
                                    *clients.embedder, cfg.fusion, result.warnings);
    std::vector<ScoredList> present;
    for (auto& [channel, list] : lists) {
      present.push_back(list);
      list.source_tag = result.channel_runs[channel].tag;
      result.channel_runs[channel].lists.emplace(topic.topic_id, std::move(list));
    }
    if (present.empty()) {
      result.warnings.push_back("topic " + std::to_string(topic.topic_id) + ": no channel produced a list");
    } else {
      result.fused.lists.emplace(topic.topic_id,
                                 combine_equal(std::move(present), cfg.fusion, cfg.k, cfg.run_tag));
    }
    result.variants.push_back(std::move(variants));
  }
  return result;
}

}  // namespace gar
