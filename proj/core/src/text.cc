// Copyright 2026 The GAR Authors
// Licensed under the Apache License, Version 2.0

#include "gar/text.h"

#include "gar/bundled_data.h"
#include "gar/error.h"

namespace gar {
namespace {

bool is_token_char(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

char lower_ascii(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    if (is_token_char(static_cast<unsigned char>(c))) {
      current.push_back(lower_ascii(c));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

const std::set<std::string>& stopwords() {
  static const std::set<std::string> kWords = [] {
    std::set<std::string> words;
    std::string_view data = bundled::stopwords_txt();
    while (!data.empty()) {
      const auto nl = data.find('\n');
      const auto line = trim(data.substr(0, nl));
      data = nl == std::string_view::npos ? std::string_view{} : data.substr(nl + 1);
      if (line.empty() || line.front() == '#') continue;
      words.insert(to_lower(line));
    }
    return words;
  }();
  return kWords;
}

bool is_stopword(std::string_view token) {
  const auto& words = stopwords();
  return words.find(std::string(token)) != words.end();
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = lower_ascii(c);
  return out;
}

std::string_view trim(std::string_view s) {
  constexpr std::string_view kSpace = " \t\r\n\f\v";
  const auto first = s.find_first_not_of(kSpace);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(kSpace);
  return s.substr(first, last - first + 1);
}

void validate_topic(const Topic& topic) {
  if (topic.topic_id <= 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "topic id must be positive: " + std::to_string(topic.topic_id));
  }
  for (const auto& token : tokenize(topic.text)) {
    if (!is_stopword(token)) return;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "topic " + std::to_string(topic.topic_id) + " has no content words");
}

}  // namespace gar
