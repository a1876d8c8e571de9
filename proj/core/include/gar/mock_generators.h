// Copyright 2026 The GAR Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gar/generation.h"

// Deterministic generator and embedder stand-ins. They make the full pipeline
// runnable without any model, and their outputs are analytically predictable:
// a mock image embeds as token_hash_embed(provenance prompt).
namespace gar::mock {

inline constexpr std::uint32_t kImageSide = 64;
inline constexpr std::string_view kPromptKeyword = "gar-prompt";

// One row of the bundled tv24 manual-query table.
struct ManualQueryFixture {
  int topic_id = 0;
  std::string manual;
  std::vector<std::string> t2t;
  std::string i2t;
};

const std::vector<ManualQueryFixture>& tv24_manual_queries();
const ManualQueryFixture* find_manual_query(int topic_id);

// The 20 bundled tv24 topics (751-770).
std::vector<Topic> tv24_topics();

using SubstitutionTable = std::vector<std::pair<std::string, std::string>>;

// JSON object mapping phrase -> replacement. Throws BadFormat.
SubstitutionTable parse_substitution_table(std::string_view json);

// Case-insensitive, token-boundary phrase replacement. Longer phrases are
// applied first; ties in length go in lexicographic phrase order.
std::string apply_substitutions(std::string_view text, const SubstitutionTable& table);

// T2T: candidates are the fixture rephrasings for the topic (if any) followed
// by the substituted query, de-duplicated; request.n outputs cycle through them.
class MockTextRewriter : public TextRewriter {
 public:
  MockTextRewriter(SubstitutionTable table, std::map<int, std::vector<std::string>> fixtures);
  std::vector<std::string> rephrase(const T2TRequest& request) override;

 private:
  SubstitutionTable table_;
  std::map<int, std::vector<std::string>> fixtures_;
};

// T2I: 64x64 RGB PNGs. Image i uses seed request.seed + i and pixel bytes from
// xorshift64* seeded with FNV-1a(prompt) XOR that seed. The prompt is also
// stored in a tEXt chunk so the image stays self-describing over the wire.
class MockImageGenerator : public ImageGenerator {
 public:
  std::vector<GeneratedImage> generate(const T2IRequest& request) override;
};

GeneratedImage render_mock_image(std::string_view prompt, std::uint64_t seed);

// I2T: fixture caption by topic id, then by T2I prompt, else
// "a photo of " + provenance prompt.
class MockCaptioner : public Captioner {
 public:
  MockCaptioner(std::map<int, std::string> by_topic, std::map<std::string, std::string> by_prompt);
  std::string caption(const GeneratedImage& image, int topic_id) override;

 private:
  std::map<int, std::string> by_topic_;
  std::map<std::string, std::string> by_prompt_;
};

class MockEmbedder : public Embedder {
 public:
  explicit MockEmbedder(std::size_t dim);
  std::vector<EmbeddingVector> embed_texts(const std::vector<std::string>& texts) override;
  std::vector<EmbeddingVector> embed_images(const std::vector<GeneratedImage>& images) override;
  std::size_t dim() const { return dim_; }

 private:
  std::size_t dim_;
};

// Prompt of a mock image: the provenance field, else the PNG tEXt chunk.
std::string image_prompt(const GeneratedImage& image);

struct MockOptions {
  std::size_t dim = 256;
  SubstitutionTable substitutions;
  bool manual_fixtures = true;
};

GeneratorClients make_mock_clients(const MockOptions& options);

}  // namespace gar::mock
