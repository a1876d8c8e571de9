// Copyright 2026 The GAR Authors
// Licensed under the Apache License, Version 2.0

#include "gar/scored_list.h"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "gar/error.h"

namespace gar {

void sort_entries(std::vector<ScoredEntry>& entries) {
  std::sort(entries.begin(), entries.end(), ranks_before);
}

bool is_canonical(const ScoredList& list) {
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < list.entries.size(); ++i) {
    if (!seen.insert(list.entries[i].shot_id).second) return false;
    if (i > 0 && !ranks_before(list.entries[i - 1], list.entries[i])) return false;
  }
  return true;
}

void validate(const ScoredList& list) {
  if (!is_canonical(list)) {
    throw Error(ErrorCode::kInvalidArgument,
                "list for topic " + std::to_string(list.topic_id) +
                    " has duplicate ids or is not in canonical order");
  }
}

bool is_valid_run_tag(const std::string& tag) {
  if (tag.empty()) return false;
  return std::none_of(tag.begin(), tag.end(),
                      [](unsigned char c) { return std::isspace(c) != 0; });
}

}  // namespace gar
