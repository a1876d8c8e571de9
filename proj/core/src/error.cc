// Copyright 2026 The GAR Authors
// Licensed under the Apache License, Version 2.0

#include "gar/error.h"

namespace gar {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kBadFormat: return "BadFormat";
    case ErrorCode::kZeroVector: return "ZeroVector";
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kDimMismatch: return "DimMismatch";
    case ErrorCode::kEmptyText: return "EmptyText";
    case ErrorCode::kAllChannelsFailed: return "AllChannelsFailed";
    case ErrorCode::kGeneratorFailed: return "GeneratorFailed";
    case ErrorCode::kEmptyList: return "EmptyList";
    case ErrorCode::kTopicMismatch: return "TopicMismatch";
    case ErrorCode::kNoLists: return "NoLists";
    case ErrorCode::kNoRuns: return "NoRuns";
    case ErrorCode::kVariantSearchFailed: return "VariantSearchFailed";
    case ErrorCode::kAllImagesFailed: return "AllImagesFailed";
    case ErrorCode::kNoTopics: return "NoTopics";
    case ErrorCode::kStoreUnavailable: return "StoreUnavailable";
    case ErrorCode::kMalformedLine: return "MalformedLine";
    case ErrorCode::kDuplicateTopic: return "DuplicateTopic";
    case ErrorCode::kDuplicateDoc: return "DuplicateDoc";
    case ErrorCode::kUnknownJudgment: return "UnknownJudgment";
    case ErrorCode::kRankGap: return "RankGap";
    case ErrorCode::kTagMismatch: return "TagMismatch";
    case ErrorCode::kQrelsMismatch: return "QrelsMismatch";
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kOovViolation: return "OovViolation";
    case ErrorCode::kIncompleteSelections: return "IncompleteSelections";
  }
  return "Unknown";
}

namespace {

std::string format_what(ErrorCode code, const std::string& detail,
                        std::size_t line) {
  std::string what(error_code_name(code));
  if (line != 0) what += "(line " + std::to_string(line) + ")";
  if (!detail.empty()) what += ": " + detail;
  return what;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& detail, std::size_t line)
    : std::runtime_error(format_what(code, detail, line)),
      code_(code),
      detail_(detail),
      line_(line) {}

}  // namespace gar
