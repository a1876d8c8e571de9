// Copyright 2026 The GAR Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "gar/text.h"

namespace gar {

// The vocabulary a concept-based search engine understands. Entries are
// trimmed and lowercased; entries that tokenize to more than one token act as
// phrases during OOV detection.
class ConceptBank {
 public:
  // Newline-delimited concepts; `#` lines and blank lines are ignored.
  static ConceptBank parse(std::string_view text, std::string source_path = {});
  static ConceptBank from_terms(const std::vector<std::string>& terms,
                                std::string source_path = {});

  const std::set<std::string>& concepts() const { return concepts_; }
  const std::string& source_path() const { return source_path_; }
  std::size_t size() const { return concepts_.size(); }

  bool contains_unigram(std::string_view token) const;
  const std::vector<std::vector<std::string>>& phrases() const { return phrases_; }

 private:
  ConceptBank() = default;
  void index();

  std::set<std::string> concepts_;
  std::set<std::string, std::less<>> unigrams_;
  std::vector<std::vector<std::string>> phrases_;
  std::string source_path_;
};

// Content tokens of `query` (lowercased, stopwords removed) that are neither
// bank unigrams nor covered by a bank phrase occurring contiguously in the
// query's full token sequence.
std::set<std::string> detect_oov(std::string_view query, const ConceptBank& bank);

inline constexpr std::size_t kPromptConceptCap = 2000;
inline constexpr std::string_view kT2TPromptVersion = "gar-t2t-prompt/1";

// Prompt for the concept-constrained rephrasing model. Lists the OOV terms and
// the first kPromptConceptCap bank concepts in lexicographic order, one per
// line prefixed by "- ". `bank` may be null when no bank is configured.
std::string build_t2t_prompt(const Topic& topic, const ConceptBank* bank,
                             const std::set<std::string>& oov);

// First `cap` concepts in lexicographic order.
std::vector<std::string> concept_sample(const ConceptBank& bank,
                                        std::size_t cap = kPromptConceptCap);

}  // namespace gar
