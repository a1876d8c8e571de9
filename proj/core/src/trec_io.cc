// Copyright 2026 The GAR Authors
// Licensed under the Apache License, Version 2.0

#include "gar/trec_io.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <unordered_set>

#include "gar/error.h"
#include "line_reader.h"

namespace gar {
namespace {

using internal::LineReader;
using internal::split_whitespace;

template <typename T>
bool parse_number(std::string_view field, T& out) {
  const char* first = field.data();
  const char* last = first + field.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::string format_score(double score) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", score);
  return buf;
}

}  // namespace

std::vector<Topic> parse_topics(std::string_view text) {
  std::vector<Topic> topics;
  std::set<int> seen;
  LineReader reader(text);
  std::string_view line;
  while (reader.next(line)) {
    const auto stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw Error(ErrorCode::kMalformedLine, "expected topic_id<TAB>query", reader.lineno());
    }
    int id = 0;
    if (!parse_number(trim(line.substr(0, tab)), id) || id <= 0) {
      throw Error(ErrorCode::kMalformedLine, "topic id is not a positive integer",
                  reader.lineno());
    }
    Topic topic{id, std::string(trim(line.substr(tab + 1)))};
    try {
      validate_topic(topic);
    } catch (const Error& e) {
      throw Error(ErrorCode::kMalformedLine, e.detail(), reader.lineno());
    }
    if (!seen.insert(id).second) {
      throw Error(ErrorCode::kDuplicateTopic, std::to_string(id), reader.lineno());
    }
    topics.push_back(std::move(topic));
  }
  return topics;
}

std::string write_topics(const std::vector<Topic>& topics) {
  std::string out;
  for (const auto& t : topics) out += std::to_string(t.topic_id) + "\t" + t.text + "\n";
  return out;
}

std::size_t Stratum::sampled() const {
  return static_cast<std::size_t>(std::count_if(
      entries.begin(), entries.end(), [](const QrelsEntry& e) { return e.judgment >= 0; }));
}

std::size_t Stratum::relevant() const {
  return static_cast<std::size_t>(std::count_if(
      entries.begin(), entries.end(), [](const QrelsEntry& e) { return e.judgment >= 1; }));
}

const Stratum* TopicQrels::find_stratum(std::string_view id) const {
  for (const auto& s : strata) {
    if (s.stratum_id == id) return &s;
  }
  return nullptr;
}

StratifiedQrels parse_qrels(std::string_view text) {
  StratifiedQrels qrels;
  LineReader reader(text);
  std::string_view line;
  while (reader.next(line)) {
    const auto fields = split_whitespace(line);
    if (fields.empty() || fields.front().front() == '#') continue;
    if (fields.size() != 4) {
      throw Error(ErrorCode::kMalformedLine, "expected 4 columns: topic stratum doc judgment",
                  reader.lineno());
    }
    int topic = 0;
    int judgment = 0;
    if (!parse_number(fields[0], topic) || topic <= 0) {
      throw Error(ErrorCode::kMalformedLine, "topic is not a positive integer", reader.lineno());
    }
    if (!parse_number(fields[3], judgment)) {
      throw Error(ErrorCode::kMalformedLine, "judgment is not an integer", reader.lineno());
    }
    if (judgment < kUnsampled) {
      throw Error(ErrorCode::kUnknownJudgment, std::to_string(judgment), reader.lineno());
    }
    auto& tq = qrels.topics[topic];
    const std::string doc(fields[2]);
    if (tq.docs.count(doc) != 0) {
      throw Error(ErrorCode::kDuplicateDoc, "topic " + std::to_string(topic) + " doc " + doc,
                  reader.lineno());
    }
    std::size_t index = tq.strata.size();
    for (std::size_t i = 0; i < tq.strata.size(); ++i) {
      if (tq.strata[i].stratum_id == fields[1]) {
        index = i;
        break;
      }
    }
    if (index == tq.strata.size()) tq.strata.push_back({std::string(fields[1]), {}});
    tq.strata[index].entries.push_back({doc, judgment});
    tq.docs.emplace(doc, std::make_pair(index, judgment));
  }
  return qrels;
}

std::string write_qrels(const StratifiedQrels& qrels) {
  std::string out;
  for (const auto& [topic, tq] : qrels.topics) {
    for (const auto& s : tq.strata) {
      for (const auto& e : s.entries) {
        out += std::to_string(topic) + " " + s.stratum_id + " " + e.doc_id + " " +
               std::to_string(e.judgment) + "\n";
      }
    }
  }
  return out;
}

std::string write_run(const Run& run) {
  if (!is_valid_run_tag(run.tag)) {
    throw Error(ErrorCode::kInvalidArgument, "run tag must be non-empty without whitespace");
  }
  std::string out;
  for (const auto& [topic, list] : run.lists) {
    const std::string prefix = std::to_string(topic) + " Q0 ";
    for (std::size_t i = 0; i < list.entries.size(); ++i) {
      const auto& e = list.entries[i];
      out += prefix;
      out += e.shot_id;
      out += ' ';
      out += std::to_string(i + 1);
      out += ' ';
      out += format_score(e.score);
      out += ' ';
      out += run.tag;
      out += '\n';
    }
  }
  return out;
}

Run read_run(std::string_view text) {
  struct Line {
    long rank;
    std::string doc;
    double score;
    std::size_t lineno;
  };
  std::map<int, std::vector<Line>> by_topic;
  Run run;
  bool have_tag = false;
  LineReader reader(text);
  std::string_view line;
  while (reader.next(line)) {
    const auto fields = split_whitespace(line);
    if (fields.empty()) continue;
    if (fields.size() != 6) {
      throw Error(ErrorCode::kMalformedLine, "expected 6 columns", reader.lineno());
    }
    int topic = 0;
    long rank = 0;
    double score = 0.0;
    if (!parse_number(fields[0], topic) || topic <= 0) {
      throw Error(ErrorCode::kMalformedLine, "topic is not a positive integer", reader.lineno());
    }
    if (fields[1] != "Q0") throw Error(ErrorCode::kMalformedLine, "second column must be Q0", reader.lineno());
    if (!parse_number(fields[3], rank) || rank <= 0) {
      throw Error(ErrorCode::kMalformedLine, "rank is not a positive integer", reader.lineno());
    }
    if (!parse_number(fields[4], score) || !std::isfinite(score)) {
      throw Error(ErrorCode::kMalformedLine, "score is not a finite number", reader.lineno());
    }
    if (!have_tag) {
      run.tag = std::string(fields[5]);
      have_tag = true;
    } else if (fields[5] != run.tag) {
      throw Error(ErrorCode::kTagMismatch, "'" + run.tag + "' vs '" + std::string(fields[5]) + "'",
                  reader.lineno());
    }
    by_topic[topic].push_back({rank, std::string(fields[2]), score, reader.lineno()});
  }

  for (auto& [topic, lines] : by_topic) {
    std::stable_sort(lines.begin(), lines.end(),
                     [](const Line& a, const Line& b) { return a.rank < b.rank; });
    ScoredList list;
    list.topic_id = topic;
    list.source_tag = run.tag;
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const auto expected = static_cast<long>(i + 1);
      if (lines[i].rank != expected) {
        throw Error(ErrorCode::kRankGap,
                    "topic " + std::to_string(topic) + ": expected rank " +
                        std::to_string(expected) + ", got " + std::to_string(lines[i].rank),
                    lines[i].lineno);
      }
      if (!seen.insert(lines[i].doc).second) {
        throw Error(ErrorCode::kDuplicateDoc, "topic " + std::to_string(topic) + " doc " + lines[i].doc,
                    lines[i].lineno);
      }
      if (i > 0 && lines[i].score > lines[i - 1].score) {
        throw Error(ErrorCode::kMalformedLine, "score increases with rank", lines[i].lineno);
      }
      list.entries.push_back({std::move(lines[i].doc), lines[i].score});
    }
    run.lists.emplace(topic, std::move(list));
  }
  return run;
}

}  // namespace gar
