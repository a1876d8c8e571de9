// Copyright 2026 The GAR Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace gar {

// Lowercased runs of ASCII letters and digits, in order of appearance.
std::vector<std::string> tokenize(std::string_view text);

// The bundled 50-word stopword list.
const std::set<std::string>& stopwords();
bool is_stopword(std::string_view token);

std::string to_lower(std::string_view s);
std::string_view trim(std::string_view s);

struct Topic {
  int topic_id = 0;
  std::string text;

  friend bool operator==(const Topic&, const Topic&) = default;
};

// Throws InvalidArgument unless id > 0 and text has a non-stopword token.
void validate_topic(const Topic& topic);

}  // namespace gar
