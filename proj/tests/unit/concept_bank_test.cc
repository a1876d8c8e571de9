// Copyright 2026 The GAR Authors
// Licensed under the Apache License, Version 2.0

#include "gar/concept_bank.h"

#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "gar/error.h"
#include "gar/text.h"

namespace gar {
namespace {

using Terms = std::set<std::string>;

TEST(Tokenize, LowercaseAlphanumericRuns) {
  EXPECT_EQ(tokenize("A bald-man, with GLASSES!"),
            (std::vector<std::string>{"a", "bald", "man", "with", "glasses"}));
  EXPECT_TRUE(tokenize("!!!").empty());
  EXPECT_EQ(tokenize("v3c2 shot42"), (std::vector<std::string>{"v3c2", "shot42"}));
}

TEST(Stopwords, BundledListLoaded) {
  EXPECT_TRUE(is_stopword("the"));
  EXPECT_TRUE(is_stopword("in"));
  EXPECT_FALSE(is_stopword("glasses"));
  EXPECT_GT(stopwords().size(), 20u);
}

TEST(Topic, ValidationRequiresContentToken) {
  EXPECT_NO_THROW(validate_topic({751, "A bald man with glasses"}));
  EXPECT_THROW(validate_topic({0, "glasses"}), Error);
  EXPECT_THROW(validate_topic({1, "the of in"}), Error);
  EXPECT_THROW(validate_topic({1, ""}), Error);
}

TEST(ConceptBank, TrimsLowercasesAndDeduplicates) {
  const auto bank = ConceptBank::parse("# concepts\n People \npeople\n\nStreet Scene\n", "bank.txt");
  EXPECT_EQ(bank.concepts(), (Terms{"people", "street scene"}));
  EXPECT_EQ(bank.source_path(), "bank.txt");
  EXPECT_TRUE(bank.contains_unigram("people"));
  ASSERT_EQ(bank.phrases().size(), 1u);
  EXPECT_EQ(bank.phrases()[0], (std::vector<std::string>{"street", "scene"}));
}

TEST(ConceptBank, EmptyBankRejected) {
  EXPECT_THROW(ConceptBank::parse("# nothing\n\n"), Error);
  EXPECT_THROW(ConceptBank::from_terms({" ", ""}), Error);
}

TEST(DetectOov, StandingInLine) {
  const auto bank = ConceptBank::from_terms({"people", "outdoors", "lineup"});
  EXPECT_EQ(detect_oov("Find shots of people standing in line outdoors", bank),
            (Terms{"standing", "line"}));
}

TEST(DetectOov, FullCoverageAndEmptyQuery) {
  const auto bank = ConceptBank::from_terms({"people", "outdoors"});
  EXPECT_TRUE(detect_oov("people outdoors", bank).empty());
  EXPECT_TRUE(detect_oov("", bank).empty());
}

TEST(DetectOov, PhraseCoversContiguousTokensOnly) {
  const auto bank = ConceptBank::from_terms({"traffic light", "car"});
  EXPECT_TRUE(detect_oov("a car at a traffic light", bank).empty());
  EXPECT_EQ(detect_oov("traffic near a light", bank), (Terms{"traffic", "near", "light"}));
}

TEST(DetectOov, CaseInsensitive) {
  const auto bank = ConceptBank::from_terms({"glasses", "man", "bald"});
  EXPECT_TRUE(detect_oov("A BALD Man with Glasses", bank).empty());
}

// Subset of the query's tokens, and adding concepts never grows the set.
TEST(DetectOov, SubsetAndMonotonicityProperty) {
  const std::vector<std::string> vocab = {"red",  "car",   "street", "people", "standing", "line",
                                          "dog",  "grass", "bald",   "man",    "glasses",  "hat",
                                          "rain", "day",   "outdoors"};
  const std::vector<std::string> phrases = {"red car", "standing in line", "rainy day", "bald man"};
  std::mt19937 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    std::string query;
    const int len = 1 + static_cast<int>(rng() % 8);
    for (int i = 0; i < len; ++i) {
      query += (i ? " " : "") + vocab[rng() % vocab.size()];
      if (rng() % 4 == 0) query += " in";
    }
    std::vector<std::string> terms = {"people"};
    for (const auto& v : vocab) {
      if (rng() % 3 == 0) terms.push_back(v);
    }
    if (rng() % 2) terms.push_back(phrases[rng() % phrases.size()]);
    const auto bank = ConceptBank::from_terms(terms);
    const auto oov = detect_oov(query, bank);
    const auto tokens = tokenize(query);
    for (const auto& t : oov) {
      EXPECT_NE(std::find(tokens.begin(), tokens.end(), t), tokens.end());
    }
    auto bigger_terms = terms;
    bigger_terms.push_back(rng() % 2 ? vocab[rng() % vocab.size()] : phrases[rng() % phrases.size()]);
    const auto bigger = detect_oov(query, ConceptBank::from_terms(bigger_terms));
    EXPECT_TRUE(std::includes(oov.begin(), oov.end(), bigger.begin(), bigger.end())) << query;
  }
}

TEST(T2TPrompt, ContainsQueryText) {
  const auto bank = ConceptBank::from_terms({"man", "glasses", "bald"});
  const Topic topic{751, "A bald man with glasses"};
  const auto prompt = build_t2t_prompt(topic, &bank, detect_oov(topic.text, bank));
  EXPECT_NE(prompt.find("A bald man with glasses"), std::string::npos);
  EXPECT_NE(prompt.find("Out-of-vocabulary terms: (none)"), std::string::npos);
  EXPECT_NE(prompt.find(kT2TPromptVersion), std::string::npos);
}

TEST(T2TPrompt, ListsOovTerms) {
  const auto bank = ConceptBank::from_terms({"people", "lineup"});
  const auto prompt = build_t2t_prompt({1, "people standing in line"}, &bank, {"standing", "line"});
  EXPECT_NE(prompt.find("Out-of-vocabulary terms: line, standing"), std::string::npos);
}

TEST(T2TPrompt, ConceptSampleCappedAt2000InLexicographicOrder) {
  std::vector<std::string> terms;
  for (int i = 0; i < 5000; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "c%04d", 4999 - i);
    terms.push_back(buf);
  }
  const auto bank = ConceptBank::from_terms(terms);
  const auto prompt = build_t2t_prompt({1, "query words"}, &bank, {});
  std::size_t count = 0;
  for (std::size_t pos = prompt.find("\n- "); pos != std::string::npos; pos = prompt.find("\n- ", pos + 1)) {
    ++count;
  }
  EXPECT_EQ(count, 2000u);
  EXPECT_NE(prompt.find("Concepts (2000 of 5000)"), std::string::npos);
  EXPECT_NE(prompt.find("- c0000\n"), std::string::npos);
  EXPECT_NE(prompt.find("- c1999\n"), std::string::npos);
  EXPECT_EQ(prompt.find("- c2000\n"), std::string::npos);
}

TEST(T2TPrompt, DeterministicAndBankOptional) {
  const auto bank = ConceptBank::from_terms({"a1", "b2"});
  const Topic topic{3, "some query"};
  EXPECT_EQ(build_t2t_prompt(topic, &bank, {}), build_t2t_prompt(topic, &bank, {}));
  EXPECT_NE(build_t2t_prompt(topic, nullptr, {}).find("Concepts (0 of 0)"), std::string::npos);
}

}  // namespace
}  // namespace gar
