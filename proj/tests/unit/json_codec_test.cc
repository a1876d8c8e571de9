// Copyright 2026 The GAR Authors
// Licensed under the Apache License, Version 2.0

#include "gar/json_codec.h"

#include <gtest/gtest.h>

#include "gar/error.h"
#include "gar/mock_generators.h"

namespace gar {
namespace {

TEST(JsonCodec, ListRoundTrip) {
  const ScoredList list{751, {{"s1", 0.75}, {"s2", 0.25}}, "gar"};
  const auto doc = encode_list(list);
  EXPECT_EQ(doc.dump(),
            R"({"topic_id":751,"source_tag":"gar","hits":[{"shot_id":"s1","score":0.75},)"
            R"({"shot_id":"s2","score":0.25}]})");
  EXPECT_EQ(decode_list(doc), list);
  EXPECT_THROW(decode_list(Json::parse(R"({"topic_id":"x","hits":[]})")), Error);
}

TEST(JsonCodec, ImageRoundTrip) {
  const auto image = mock::render_mock_image("a red car", 7);
  const auto doc = encode_image(image);
  EXPECT_EQ(doc.at("provenance_prompt"), "a red car");
  EXPECT_EQ(doc.at("seed"), 7);
  EXPECT_EQ(decode_image(doc), image);
  EXPECT_THROW(decode_image(Json::parse(R"({"png_base64":"***"})")), Error);
}

TEST(JsonCodec, VariantsCarryCandidateOov) {
  QueryVariantSet v;
  v.topic = {751, "A bald man with glasses"};
  v.t2t_texts = {"A bald man wearing spectacles"};
  v.i2t_captions = {"a man"};
  v.oov = {};
  const auto bank = ConceptBank::from_terms({"bald", "man", "glasses"});
  const auto doc = encode_variants(v, &bank);
  EXPECT_EQ(doc.at("t2t").at(0).at("oov"), Json::parse(R"(["spectacles","wearing"])"));
  EXPECT_TRUE(doc.at("i2t").at(0).at("oov").empty());
  EXPECT_EQ(decode_variants(doc), v);
  EXPECT_TRUE(encode_variants(v, nullptr).at("t2t").at(0).at("oov").empty());
}

TEST(JsonCodec, VariantsAcceptPlainStrings) {
  const auto doc = Json::parse(
      R"({"topic":{"topic_id":3,"text":"q"},"t2t":["a","b"],"i2t":[{"text":"c"}]})");
  const auto v = decode_variants(doc);
  EXPECT_EQ(v.topic.topic_id, 3);
  EXPECT_EQ(v.t2t_texts, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(v.i2t_captions, std::vector<std::string>{"c"});
  EXPECT_THROW(decode_variants(Json::parse(R"({"t2t":[]})")), Error);
}

TEST(JsonCodec, FusionSpecDefaultsAndFields) {
  const auto equal = decode_fusion_spec(Json(), 3);
  EXPECT_EQ(equal.weights, (std::vector<double>{1, 1, 1}));
  EXPECT_EQ(equal.normalization, Normalization::kMinMax);
  const auto spec = decode_fusion_spec(
      Json::parse(R"({"weights":[1,2],"normalization":"rank","cutoff":5,"missing_score":0.1})"), 2);
  EXPECT_EQ(spec.weights, (std::vector<double>{1, 2}));
  EXPECT_EQ(spec.normalization, Normalization::kRank);
  EXPECT_EQ(spec.cutoff, 5u);
  EXPECT_DOUBLE_EQ(spec.missing_score, 0.1);
  EXPECT_EQ(decode_fusion_spec(encode_fusion_spec(spec), 2).weights, spec.weights);
  EXPECT_THROW(decode_fusion_spec(Json::parse(R"({"normalization":"zscore"})"), 2), Error);
  EXPECT_THROW(validate(decode_fusion_spec(Json::parse(R"({"weights":[1]})"), 2), 2), Error);
}

}  // namespace
}  // namespace gar
