// Copyright 2026 The GAR Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gar/scored_list.h"
#include "gar/text.h"

namespace gar {

// `topic_id<TAB>query` per line; blank lines and `#` comments skipped.
// Throws MalformedLine(lineno) or DuplicateTopic.
std::vector<Topic> parse_topics(std::string_view text);
std::string write_topics(const std::vector<Topic>& topics);

// Judgment values: -1 pooled but not sampled, 0 judged nonrelevant,
// >= 1 judged relevant.
inline constexpr int kUnsampled = -1;

struct QrelsEntry {
  std::string doc_id;
  int judgment = kUnsampled;
};

struct Stratum {
  std::string stratum_id;
  std::vector<QrelsEntry> entries;  // file order

  std::size_t pool_size() const { return entries.size(); }  // N_s
  std::size_t sampled() const;                              // m_s
  std::size_t relevant() const;                             // r_s
};

struct TopicQrels {
  std::vector<Stratum> strata;  // first-appearance order
  // doc -> (index into strata, judgment)
  std::unordered_map<std::string, std::pair<std::size_t, int>> docs;

  const Stratum* find_stratum(std::string_view id) const;
};

struct StratifiedQrels {
  std::map<int, TopicQrels> topics;

  bool empty() const { return topics.empty(); }
};

// Whitespace-separated `topic stratum doc judgment` lines. Throws
// MalformedLine, DuplicateDoc or UnknownJudgment (judgment < -1).
StratifiedQrels parse_qrels(std::string_view text);
std::string write_qrels(const StratifiedQrels& qrels);

// `topic Q0 doc rank score tag` lines sorted by topic then rank, score with
// six decimals, LF endings. Ranks are list positions.
std::string write_run(const Run& run);

// Inverse of write_run. Ranks must be 1..n per topic (RankGap), all lines
// share one tag (TagMismatch), and scores must not increase with rank.
// Entries keep the file's rank order.
Run read_run(std::string_view text);

}  // namespace gar
