// Copyright 2026 The GAR Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <nlohmann/json.hpp>

#include "gar/concept_bank.h"
#include "gar/evaluation.h"
#include "gar/fusion.h"
#include "gar/generation.h"
#include "gar/scored_list.h"

// JSON shapes shared by the service and the CLI. Decoders throw
// Error(kInvalidArgument) on missing or mistyped fields.
namespace gar {

using Json = nlohmann::ordered_json;

// {"topic_id", "source_tag", "hits": [{"shot_id", "score"}]}
Json encode_list(const ScoredList& list);
ScoredList decode_list(const Json& doc);

// {"png_base64", "provenance_prompt", "seed"}
Json encode_image(const GeneratedImage& image);
GeneratedImage decode_image(const Json& doc);

// {"topic": {"topic_id", "text"}, "oov": [...], "t2t": [{"text", "oov"}],
//  "t2i": [image], "i2t": [{"text", "oov"}], "warnings": [...]}
// Candidate OOV lists are computed against `bank` and left empty without one.
Json encode_variants(const QueryVariantSet& variants, const ConceptBank* bank);
QueryVariantSet decode_variants(const Json& doc);

// {"weights"?, "normalization"?, "cutoff"?, "missing_score"?}; absent fields
// keep their defaults and absent weights mean equal weights over `n_lists`.
FusionSpec decode_fusion_spec(const Json& doc, std::size_t n_lists);
Json encode_fusion_spec(const FusionSpec& spec);

Json encode_report(const EvalReport& report);

Json encode_oov(const std::set<std::string>& oov);

}  // namespace gar
