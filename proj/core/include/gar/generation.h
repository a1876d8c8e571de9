// Copyright 2026 The GAR Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "gar/concept_bank.h"
#include "gar/embedding_index.h"
#include "gar/text.h"

namespace gar {

struct GeneratedImage {
  std::string png;  // encoded PNG bytes
  std::string provenance_prompt;
  std::uint64_t seed = 0;

  friend bool operator==(const GeneratedImage&, const GeneratedImage&) = default;
};

struct QueryVariantSet {
  Topic topic;
  std::vector<std::string> t2t_texts;
  std::vector<GeneratedImage> t2i_images;
  std::vector<std::string> i2t_captions;  // one per image when I2T ran

  std::set<std::string> oov;  // OOV terms of the original query
  std::vector<std::string> warnings;

  friend bool operator==(const QueryVariantSet&, const QueryVariantSet&) = default;
};

enum class Channel { kOriginal, kT2T, kT2I, kI2T };

std::string_view channel_name(Channel channel);
// Throws InvalidArgument for unknown names.
Channel parse_channel(std::string_view name);
// Comma-separated list, e.g. "original,t2t,t2i,i2t".
std::set<Channel> parse_channel_list(std::string_view names);

struct GeneratorConfig {
  int n_t2t = 1;
  int n_images = 4;
  std::uint64_t seed = 0;
  bool enable_t2t = true;
  bool enable_t2i = true;
  bool enable_i2t = true;
  std::size_t in_flight_cap = 4;  // per endpoint, HTTP clients only
};

// Throws InvalidArgument when an enabled channel has a count below 1.
void validate(const GeneratorConfig& cfg);

struct T2TRequest {
  int topic_id = 0;
  std::string query;
  std::vector<std::string> concepts;
  std::vector<std::string> oov;
  int n = 1;
  std::string prompt;
};

struct T2IRequest {
  int topic_id = 0;
  std::string prompt;
  int n = 1;
  std::uint64_t seed = 0;
};

class TextRewriter {
 public:
  virtual ~TextRewriter() = default;
  virtual std::vector<std::string> rephrase(const T2TRequest& request) = 0;
};

class ImageGenerator {
 public:
  virtual ~ImageGenerator() = default;
  virtual std::vector<GeneratedImage> generate(const T2IRequest& request) = 0;
};

class Captioner {
 public:
  virtual ~Captioner() = default;
  // `topic_id` is a hint for fixture-backed captioners; 0 when unknown.
  virtual std::string caption(const GeneratedImage& image, int topic_id) = 0;
};

class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual std::vector<EmbeddingVector> embed_texts(const std::vector<std::string>& texts) = 0;
  virtual std::vector<EmbeddingVector> embed_images(
      const std::vector<GeneratedImage>& images) = 0;
};

struct GeneratorClients {
  std::shared_ptr<TextRewriter> t2t;
  std::shared_ptr<ImageGenerator> t2i;
  std::shared_ptr<Captioner> i2t;
  std::shared_ptr<Embedder> embedder;
};

// Prompt sent to the text-to-image model: the original query followed by a
// fixed rendering-style suffix.
inline constexpr std::string_view kT2IPromptSuffix = ", photorealistic video still";
std::string build_t2i_prompt(const Topic& topic);

// Runs the enabled T2T / T2I / I2T generators for one topic. A failing
// channel is left empty and a warning is recorded; AllChannelsFailed is
// thrown only when every enabled channel failed. I2T captions the T2I images,
// so images are generated whenever I2T is enabled.
QueryVariantSet generate_variants(const Topic& topic, const GeneratorConfig& cfg,
                                  const GeneratorClients& clients,
                                  const ConceptBank* bank);

// Deterministic stand-in text embedder: FNV-1a of each token picks a bucket
// (hash mod dim) and a sign (bit 63), counts accumulate, result is L2
// normalized. Throws InvalidArgument for dim < 8 and EmptyText when no token
// survives tokenization.
EmbeddingVector token_hash_embed(std::string_view text, std::size_t dim);

}  // namespace gar
