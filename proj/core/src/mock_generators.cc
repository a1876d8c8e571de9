// Copyright 2026 The GAR Authors
// Licensed under the Apache License, Version 2.0

#include "gar/mock_generators.h"

#include <algorithm>
#include <cctype>

#include <nlohmann/json.hpp>

#include "gar/bundled_data.h"
#include "gar/error.h"
#include "gar/hash.h"
#include "gar/png.h"
#include "gar/trec_io.h"

namespace gar::mock {
namespace {

bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

}  // namespace

const std::vector<ManualQueryFixture>& tv24_manual_queries() {
  static const std::vector<ManualQueryFixture> kRows = [] {
    std::vector<ManualQueryFixture> rows;
    const auto doc = nlohmann::json::parse(bundled::tv24_manual_queries_json());
    for (const auto& item : doc) {
      ManualQueryFixture row;
      row.topic_id = item.at("topic_id").get<int>();
      row.manual = item.at("manual").get<std::string>();
      row.t2t = item.at("t2t").get<std::vector<std::string>>();
      row.i2t = item.at("i2t").get<std::string>();
      rows.push_back(std::move(row));
    }
    return rows;
  }();
  return kRows;
}

const ManualQueryFixture* find_manual_query(int topic_id) {
  for (const auto& row : tv24_manual_queries()) {
    if (row.topic_id == topic_id) return &row;
  }
  return nullptr;
}

std::vector<Topic> tv24_topics() { return parse_topics(bundled::tv24_topics_tsv()); }

SubstitutionTable parse_substitution_table(std::string_view json) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kBadFormat, std::string("substitution table: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::kBadFormat, "substitution table must be a JSON object");
  SubstitutionTable table;
  for (const auto& [phrase, replacement] : doc.items()) {
    if (!replacement.is_string()) {
      throw Error(ErrorCode::kBadFormat, "replacement for '" + phrase + "' is not a string");
    }
    if (trim(phrase).empty()) throw Error(ErrorCode::kBadFormat, "empty phrase in substitution table");
    table.emplace_back(phrase, replacement.get<std::string>());
  }
  return table;
}

std::string apply_substitutions(std::string_view text, const SubstitutionTable& table) {
  auto ordered = table;
  std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    if (a.first.size() != b.first.size()) return a.first.size() > b.first.size();
    return a.first < b.first;
  });
  std::string out(text);
  for (const auto& [phrase, replacement] : ordered) {
    const std::string needle = to_lower(phrase);
    std::size_t pos = 0;
    while (true) {
      const std::string lowered = to_lower(out);
      pos = lowered.find(needle, pos);
      if (pos == std::string::npos) break;
      const std::size_t end = pos + needle.size();
      const bool left_ok = pos == 0 || !is_word_char(out[pos - 1]);
      const bool right_ok = end == out.size() || !is_word_char(out[end]);
      if (left_ok && right_ok) {
        out.replace(pos, needle.size(), replacement);
        pos += replacement.size();
      } else {
        pos += 1;
      }
    }
  }
  return out;
}

MockTextRewriter::MockTextRewriter(SubstitutionTable table,
                                   std::map<int, std::vector<std::string>> fixtures)
    : table_(std::move(table)), fixtures_(std::move(fixtures)) {}

std::vector<std::string> MockTextRewriter::rephrase(const T2TRequest& request) {
  std::vector<std::string> candidates;
  if (auto it = fixtures_.find(request.topic_id); it != fixtures_.end()) {
    candidates = it->second;
  }
  auto substituted = apply_substitutions(request.query, table_);
  if (std::find(candidates.begin(), candidates.end(), substituted) == candidates.end()) {
    candidates.push_back(std::move(substituted));
  }
  std::vector<std::string> out;
  for (int i = 0; i < request.n; ++i) out.push_back(candidates[i % candidates.size()]);
  return out;
}

GeneratedImage render_mock_image(std::string_view prompt, std::uint64_t seed) {
  XorShift64Star rng(fnv1a64(prompt) ^ seed);
  std::vector<std::uint8_t> pixels(static_cast<std::size_t>(kImageSide) * kImageSide * 3);
  for (std::size_t i = 0; i < pixels.size(); i += 8) {
    std::uint64_t word = rng.next();
    for (std::size_t b = 0; b < 8 && i + b < pixels.size(); ++b) {
      pixels[i + b] = static_cast<std::uint8_t>(word & 0xff);
      word >>= 8;
    }
  }
  GeneratedImage image;
  image.png = encode_png_rgb(kImageSide, kImageSide, pixels,
                             {{std::string(kPromptKeyword), std::string(prompt)}});
  image.provenance_prompt = std::string(prompt);
  image.seed = seed;
  return image;
}

std::vector<GeneratedImage> MockImageGenerator::generate(const T2IRequest& request) {
  std::vector<GeneratedImage> images;
  for (int i = 0; i < request.n; ++i) {
    images.push_back(render_mock_image(request.prompt, request.seed + static_cast<std::uint64_t>(i)));
  }
  return images;
}

MockCaptioner::MockCaptioner(std::map<int, std::string> by_topic,
                             std::map<std::string, std::string> by_prompt)
    : by_topic_(std::move(by_topic)), by_prompt_(std::move(by_prompt)) {}

std::string MockCaptioner::caption(const GeneratedImage& image, int topic_id) {
  if (auto it = by_topic_.find(topic_id); it != by_topic_.end()) return it->second;
  const auto prompt = image_prompt(image);
  if (auto it = by_prompt_.find(prompt); it != by_prompt_.end()) return it->second;
  return "a photo of " + prompt;
}

std::string image_prompt(const GeneratedImage& image) {
  if (!image.provenance_prompt.empty()) return image.provenance_prompt;
  if (auto text = png_text(image.png, kPromptKeyword)) return *text;
  throw Error(ErrorCode::kGeneratorFailed, "image carries no provenance prompt");
}

MockEmbedder::MockEmbedder(std::size_t dim) : dim_(dim) {}

std::vector<EmbeddingVector> MockEmbedder::embed_texts(const std::vector<std::string>& texts) {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(token_hash_embed(t, dim_));
  return out;
}

std::vector<EmbeddingVector> MockEmbedder::embed_images(const std::vector<GeneratedImage>& images) {
  std::vector<EmbeddingVector> out;
  out.reserve(images.size());
  for (const auto& img : images) out.push_back(token_hash_embed(image_prompt(img), dim_));
  return out;
}

GeneratorClients make_mock_clients(const MockOptions& options) {
  std::map<int, std::vector<std::string>> t2t_fixtures;
  std::map<int, std::string> caption_by_topic;
  std::map<std::string, std::string> caption_by_prompt;
  if (options.manual_fixtures) {
    std::map<int, std::string> topic_text;
    for (const auto& t : tv24_topics()) topic_text[t.topic_id] = t.text;
    for (const auto& row : tv24_manual_queries()) {
      if (!row.t2t.empty()) t2t_fixtures[row.topic_id] = row.t2t;
      caption_by_topic[row.topic_id] = row.i2t;
      if (auto it = topic_text.find(row.topic_id); it != topic_text.end()) {
        caption_by_prompt[build_t2i_prompt({row.topic_id, it->second})] = row.i2t;
      }
    }
  }
  GeneratorClients clients;
  clients.t2t = std::make_shared<MockTextRewriter>(options.substitutions, std::move(t2t_fixtures));
  clients.t2i = std::make_shared<MockImageGenerator>();
  clients.i2t = std::make_shared<MockCaptioner>(std::move(caption_by_topic), std::move(caption_by_prompt));
  clients.embedder = std::make_shared<MockEmbedder>(options.dim);
  return clients;
}

}  // namespace gar::mock
