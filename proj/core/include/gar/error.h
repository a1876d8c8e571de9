// Copyright 2026 The GAR Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gar {

enum class ErrorCode {
  kInvalidArgument,
  kIo,
  kBadFormat,
  // embedding_index
  kZeroVector,
  kNonFinite,
  kDuplicateId,
  kDimMismatch,
  // generation
  kEmptyText,
  kAllChannelsFailed,
  kGeneratorFailed,
  // fusion
  kEmptyList,
  kTopicMismatch,
  kNoLists,
  kNoRuns,
  // pipeline
  kVariantSearchFailed,
  kAllImagesFailed,
  kNoTopics,
  kStoreUnavailable,
  // trec_io
  kMalformedLine,
  kDuplicateTopic,
  kDuplicateDoc,
  kUnknownJudgment,
  kRankGap,
  kTagMismatch,
  // evaluation
  kQrelsMismatch,
  // service
  kNotFound,
  kOovViolation,
  kIncompleteSelections,
};

// Stable name used in CLI diagnostics and service error bodies.
std::string_view error_code_name(ErrorCode code);

// Single exception type for the library. `line()` is the 1-based input line
// for parser errors and 0 otherwise.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail, std::size_t line = 0);

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }
  std::size_t line() const noexcept { return line_; }

 private:
  ErrorCode code_;
  std::string detail_;
  std::size_t line_;
};

}  // namespace gar
