// Copyright 2026 The GAR Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <map>
#include <string>
#include <vector>

namespace gar {

struct ScoredEntry {
  std::string shot_id;
  double score = 0.0;

  friend bool operator==(const ScoredEntry&, const ScoredEntry&) = default;
};

// Per-topic rank list: unique shot ids, score descending, ties by shot_id
// ascending (byte order).
struct ScoredList {
  int topic_id = 0;
  std::vector<ScoredEntry> entries;
  std::string source_tag;

  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }

  friend bool operator==(const ScoredList&, const ScoredList&) = default;
};

// Canonical ScoredList order.
inline bool ranks_before(const ScoredEntry& a, const ScoredEntry& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.shot_id < b.shot_id;
}

void sort_entries(std::vector<ScoredEntry>& entries);

// Throws InvalidArgument when ids repeat or the order is not canonical.
void validate(const ScoredList& list);
bool is_canonical(const ScoredList& list);

// A run: one list per topic under a single tag.
struct Run {
  std::string tag;
  std::map<int, ScoredList> lists;

  friend bool operator==(const Run&, const Run&) = default;
};

// Run tags are non-empty and contain no whitespace.
bool is_valid_run_tag(const std::string& tag);

}  // namespace gar
