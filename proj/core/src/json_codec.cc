// Copyright 2026 The GAR Authors
// Licensed under the Apache License, Version 2.0

#include "gar/json_codec.h"

#include "gar/base64.h"
#include "gar/error.h"

namespace gar {
namespace {

template <typename F>
auto decoding(std::string_view what, F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string(what) + ": " + e.what());
  }
}

Json encode_candidates(const std::vector<std::string>& texts, const ConceptBank* bank) {
  Json out = Json::array();
  for (const auto& text : texts) {
    Json oov = Json::array();
    if (bank) oov = encode_oov(detect_oov(text, *bank));
    out.push_back({{"text", text}, {"oov", oov}});
  }
  return out;
}

std::vector<std::string> decode_candidates(const Json& doc, const char* key) {
  std::vector<std::string> out;
  if (!doc.contains(key)) return out;
  for (const auto& c : doc.at(key)) {
    out.push_back(c.is_string() ? c.get<std::string>() : c.at("text").get<std::string>());
  }
  return out;
}

}  // namespace

Json encode_oov(const std::set<std::string>& oov) {
  Json out = Json::array();
  for (const auto& term : oov) out.push_back(term);
  return out;
}

Json encode_list(const ScoredList& list) {
  Json hits = Json::array();
  for (const auto& e : list.entries) hits.push_back({{"shot_id", e.shot_id}, {"score", e.score}});
  return {{"topic_id", list.topic_id}, {"source_tag", list.source_tag}, {"hits", hits}};
}

ScoredList decode_list(const Json& doc) {
  return decoding("list", [&] {
    ScoredList list;
    list.topic_id = doc.value("topic_id", 0);
    list.source_tag = doc.value("source_tag", std::string{});
    for (const auto& h : doc.at("hits")) {
      list.entries.push_back({h.at("shot_id").get<std::string>(), h.at("score").get<double>()});
    }
    return list;
  });
}

Json encode_image(const GeneratedImage& image) {
  return {{"png_base64", base64_encode(image.png)},
          {"provenance_prompt", image.provenance_prompt},
          {"seed", image.seed}};
}

GeneratedImage decode_image(const Json& doc) {
  return decoding("image", [&] {
    GeneratedImage image;
    image.png = base64_decode(doc.at("png_base64").get<std::string>());
    image.provenance_prompt = doc.value("provenance_prompt", std::string{});
    image.seed = doc.value("seed", std::uint64_t{0});
    return image;
  });
}

Json encode_variants(const QueryVariantSet& v, const ConceptBank* bank) {
  Json images = Json::array();
  for (const auto& img : v.t2i_images) images.push_back(encode_image(img));
  return {{"topic", {{"topic_id", v.topic.topic_id}, {"text", v.topic.text}}},
          {"oov", encode_oov(v.oov)},
          {"t2t", encode_candidates(v.t2t_texts, bank)},
          {"t2i", images},
          {"i2t", encode_candidates(v.i2t_captions, bank)},
          {"warnings", v.warnings}};
}

QueryVariantSet decode_variants(const Json& doc) {
  return decoding("variant_set", [&] {
    QueryVariantSet v;
    const auto& topic = doc.at("topic");
    v.topic.topic_id = topic.value("topic_id", 0);
    v.topic.text = topic.at("text").get<std::string>();
    if (doc.contains("oov")) v.oov = doc.at("oov").get<std::set<std::string>>();
    v.t2t_texts = decode_candidates(doc, "t2t");
    if (doc.contains("t2i")) {
      for (const auto& img : doc.at("t2i")) v.t2i_images.push_back(decode_image(img));
    }
    v.i2t_captions = decode_candidates(doc, "i2t");
    v.warnings = doc.value("warnings", std::vector<std::string>{});
    return v;
  });
}

FusionSpec decode_fusion_spec(const Json& doc, std::size_t n_lists) {
  FusionSpec spec = decoding("fusion", [&] {
    FusionSpec s = equal_weights(n_lists);
    if (doc.is_null()) return s;
    if (!doc.is_object()) throw Error(ErrorCode::kInvalidArgument, "fusion: expected an object");
    if (doc.contains("weights")) s.weights = doc.at("weights").get<std::vector<double>>();
    if (doc.contains("normalization")) {
      s.normalization = parse_normalization(doc.at("normalization").get<std::string>());
    }
    if (doc.contains("cutoff")) s.cutoff = doc.at("cutoff").get<std::size_t>();
    if (doc.contains("missing_score")) s.missing_score = doc.at("missing_score").get<double>();
    return s;
  });
  return spec;
}

Json encode_fusion_spec(const FusionSpec& spec) {
  return {{"weights", spec.weights},
          {"normalization", std::string(normalization_name(spec.normalization))},
          {"cutoff", spec.cutoff},
          {"missing_score", spec.missing_score}};
}

Json encode_report(const EvalReport& report) { return Json::parse(render_report_json(report)); }

}  // namespace gar
