// Copyright 2026 The GAR Authors
// Licensed under the Apache License, Version 2.0

#include "gar/concept_bank.h"

#include <algorithm>

#include "gar/error.h"

namespace gar {

ConceptBank ConceptBank::parse(std::string_view text, std::string source_path) {
  std::vector<std::string> terms;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const auto line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (line.empty() || line.front() == '#') continue;
    terms.emplace_back(line);
  }
  return from_terms(terms, std::move(source_path));
}

ConceptBank ConceptBank::from_terms(const std::vector<std::string>& terms,
                                    std::string source_path) {
  ConceptBank bank;
  bank.source_path_ = std::move(source_path);
  for (const auto& term : terms) {
    auto cleaned = to_lower(trim(term));
    if (!cleaned.empty()) bank.concepts_.insert(std::move(cleaned));
  }
  if (bank.concepts_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "concept bank is empty");
  }
  bank.index();
  return bank;
}

void ConceptBank::index() {
  for (const auto& concept_term : concepts_) {
    auto tokens = tokenize(concept_term);
    if (tokens.size() == 1) {
      unigrams_.insert(std::move(tokens.front()));
    } else if (tokens.size() > 1) {
      phrases_.push_back(std::move(tokens));
    }
  }
}

bool ConceptBank::contains_unigram(std::string_view token) const {
  return unigrams_.find(token) != unigrams_.end();
}

std::set<std::string> detect_oov(std::string_view query, const ConceptBank& bank) {
  const auto tokens = tokenize(query);
  std::vector<bool> covered(tokens.size(), false);
  for (const auto& phrase : bank.phrases()) {
    if (phrase.size() > tokens.size()) continue;
    for (std::size_t start = 0; start + phrase.size() <= tokens.size(); ++start) {
      if (std::equal(phrase.begin(), phrase.end(), tokens.begin() + start)) {
        std::fill(covered.begin() + start, covered.begin() + start + phrase.size(), true);
      }
    }
  }
  std::set<std::string> oov;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (covered[i] || is_stopword(tokens[i]) || bank.contains_unigram(tokens[i])) continue;
    oov.insert(tokens[i]);
  }
  return oov;
}

std::vector<std::string> concept_sample(const ConceptBank& bank, std::size_t cap) {
  std::vector<std::string> out;
  out.reserve(std::min(cap, bank.size()));
  for (const auto& c : bank.concepts()) {
    if (out.size() == cap) break;
    out.push_back(c);
  }
  return out;
}

std::string build_t2t_prompt(const Topic& topic, const ConceptBank* bank,
                             const std::set<std::string>& oov) {
  std::string prompt;
  prompt += "[";
  prompt += kT2TPromptVersion;
  prompt += "]\n";
  prompt +=
      "You rewrite search queries for a video search engine that only understands "
      "the concepts listed below.\n"
      "Rephrase the query using only concepts from the list. Replace every "
      "out-of-vocabulary term with a synonym from the list and keep the meaning of "
      "the query.\n";
  prompt += "Query: " + topic.text + "\n";
  prompt += "Out-of-vocabulary terms:";
  if (oov.empty()) {
    prompt += " (none)";
  } else {
    bool first = true;
    for (const auto& term : oov) {
      prompt += first ? " " : ", ";
      prompt += term;
      first = false;
    }
  }
  prompt += "\n";
  const auto sample = bank ? concept_sample(*bank) : std::vector<std::string>{};
  prompt += "Concepts (" + std::to_string(sample.size()) + " of " +
            std::to_string(bank ? bank->size() : 0) + "):\n";
  for (const auto& c : sample) prompt += "- " + c + "\n";
  prompt += "Answer with the rephrased query only.\n";
  return prompt;
}

}  // namespace gar
