// Copyright 2026 The GAR Authors
// Licensed under the Apache License, Version 2.0

#include "gar/generation.h"

#include <exception>

#include "gar/error.h"
#include "gar/hash.h"

namespace gar {

std::string_view channel_name(Channel channel) {
  switch (channel) {
    case Channel::kOriginal: return "original";
    case Channel::kT2T: return "t2t";
    case Channel::kT2I: return "t2i";
    case Channel::kI2T: return "i2t";
  }
  return "unknown";
}

Channel parse_channel(std::string_view name) {
  const auto trimmed = trim(name);
  for (Channel c : {Channel::kOriginal, Channel::kT2T, Channel::kT2I, Channel::kI2T}) {
    if (channel_name(c) == trimmed) return c;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown channel '" + std::string(name) + "'");
}

std::set<Channel> parse_channel_list(std::string_view names) {
  std::set<Channel> out;
  while (!names.empty()) {
    const auto comma = names.find(',');
    const auto item = trim(names.substr(0, comma));
    names = comma == std::string_view::npos ? std::string_view{} : names.substr(comma + 1);
    if (!item.empty()) out.insert(parse_channel(item));
  }
  if (out.empty()) throw Error(ErrorCode::kInvalidArgument, "empty channel list");
  return out;
}

void validate(const GeneratorConfig& cfg) {
  if (cfg.enable_t2t && cfg.n_t2t < 1) {
    throw Error(ErrorCode::kInvalidArgument, "n_t2t must be >= 1 when T2T is enabled");
  }
  if ((cfg.enable_t2i || cfg.enable_i2t) && cfg.n_images < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "n_images must be >= 1 when T2I or I2T is enabled");
  }
  if (cfg.in_flight_cap < 1) {
    throw Error(ErrorCode::kInvalidArgument, "in_flight_cap must be >= 1");
  }
}

std::string build_t2i_prompt(const Topic& topic) {
  return topic.text + std::string(kT2IPromptSuffix);
}

namespace {

std::string describe(const std::exception& e) { return e.what(); }

}  // namespace

QueryVariantSet generate_variants(const Topic& topic, const GeneratorConfig& cfg,
                                  const GeneratorClients& clients,
                                  const ConceptBank* bank) {
  validate(cfg);
  QueryVariantSet out;
  out.topic = topic;
  if (bank) out.oov = detect_oov(topic.text, *bank);

  int enabled = 0;
  int failed = 0;
  auto fail = [&](std::string_view channel, const std::string& why) {
    ++failed;
    out.warnings.push_back(std::string(channel) + ": " + why);
  };

  if (cfg.enable_t2t) {
    ++enabled;
    try {
      if (!clients.t2t) throw Error(ErrorCode::kGeneratorFailed, "no T2T client configured");
      T2TRequest req;
      req.topic_id = topic.topic_id;
      req.query = topic.text;
      if (bank) req.concepts = concept_sample(*bank);
      req.oov.assign(out.oov.begin(), out.oov.end());
      req.n = cfg.n_t2t;
      req.prompt = build_t2t_prompt(topic, bank, out.oov);
      auto texts = clients.t2t->rephrase(req);
      if (texts.size() > static_cast<std::size_t>(cfg.n_t2t)) texts.resize(cfg.n_t2t);
      std::erase_if(texts, [](const std::string& t) { return trim(t).empty(); });
      if (texts.empty()) throw Error(ErrorCode::kGeneratorFailed, "T2T returned no text");
      out.t2t_texts = std::move(texts);
    } catch (const std::exception& e) {
      fail("t2t", describe(e));
    }
  }

  const bool need_images = cfg.enable_t2i || cfg.enable_i2t;
  bool images_ok = false;
  if (need_images) {
    if (cfg.enable_t2i) ++enabled;
    try {
      if (!clients.t2i) throw Error(ErrorCode::kGeneratorFailed, "no T2I client configured");
      T2IRequest req{topic.topic_id, build_t2i_prompt(topic), cfg.n_images, cfg.seed};
      auto images = clients.t2i->generate(req);
      if (images.size() > static_cast<std::size_t>(cfg.n_images)) images.resize(cfg.n_images);
      if (images.empty()) throw Error(ErrorCode::kGeneratorFailed, "T2I returned no image");
      for (const auto& img : images) {
        if (img.png.empty()) throw Error(ErrorCode::kGeneratorFailed, "T2I returned empty image");
      }
      out.t2i_images = std::move(images);
      images_ok = true;
    } catch (const std::exception& e) {
      if (cfg.enable_t2i) {
        fail("t2i", describe(e));
      } else {
        out.warnings.push_back("t2i (for i2t): " + describe(e));
      }
    }
  }

  if (cfg.enable_i2t) {
    ++enabled;
    try {
      if (!images_ok) throw Error(ErrorCode::kGeneratorFailed, "no generated images to caption");
      if (!clients.i2t) throw Error(ErrorCode::kGeneratorFailed, "no I2T client configured");
      std::vector<std::string> captions;
      captions.reserve(out.t2i_images.size());
      for (const auto& img : out.t2i_images) {
        auto caption = clients.i2t->caption(img, topic.topic_id);
        if (trim(caption).empty()) throw Error(ErrorCode::kGeneratorFailed, "empty caption");
        captions.push_back(std::move(caption));
      }
      out.i2t_captions = std::move(captions);
    } catch (const std::exception& e) {
      fail("i2t", describe(e));
    }
  }

  if (enabled > 0 && failed == enabled) {
    std::string detail = "topic " + std::to_string(topic.topic_id);
    for (const auto& w : out.warnings) detail += "; " + w;
    throw Error(ErrorCode::kAllChannelsFailed, detail);
  }
  return out;
}

EmbeddingVector token_hash_embed(std::string_view text, std::size_t dim) {
  if (dim < 8) throw Error(ErrorCode::kInvalidArgument, "token_hash_embed needs dim >= 8");
  const auto tokens = tokenize(text);
  if (tokens.empty()) throw Error(ErrorCode::kEmptyText, "no tokens in '" + std::string(text) + "'");
  EmbeddingVector v(dim, 0.0f);
  for (const auto& token : tokens) {
    const std::uint64_t h = fnv1a64(token);
    const float sign = (h >> 63) == 0 ? 1.0f : -1.0f;
    v[h % dim] += sign;
  }
  return normalize(v);
}

}  // namespace gar
