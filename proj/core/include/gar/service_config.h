// Copyright 2026 The GAR Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>

#include "gar/generation.h"
#include "gar/http_generators.h"

namespace gar {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string index_path;          // empty: search endpoints answer 503
  std::string concepts_path;       // empty: no OOV checks, export disabled
  std::string topics_path;         // empty: bundled TV24 topics
  std::string journal_path;        // empty: sessions live in memory only
  std::string substitutions_path;  // mock T2T substitution table (JSON)
  bool mock = true;
  GeneratorEndpoints endpoints;
  GeneratorConfig generator;
  std::size_t dim = 256;  // mock embedder dimension
};

// Parses the config file format, a subset of TOML:
//
//   listen = "127.0.0.1:8080"
//   index = "store.gar"
//   concepts = "bank.txt"
//   topics = "topics.tsv"
//   journal = "sessions.jsonl"
//   substitutions = "subs.json"
//   dim = 256
//
//   [generators]
//   mode = "mock"            # or "http"
//   t2t = "http://127.0.0.1:9000"
//   t2i = "http://127.0.0.1:9000"
//   i2t = "http://127.0.0.1:9000"
//   embed = "http://127.0.0.1:9000"
//   seed = 0
//   n_t2t = 1
//   n_images = 4
//   in_flight_cap = 4
//   enable_t2t = true        # likewise enable_t2i, enable_i2t
//
// Values are double-quoted strings, integers, or booleans. Unknown keys and
// sections are rejected with Error(kBadFormat) carrying the line number.
ServiceConfig parse_service_config(std::string_view text);

using EnvLookup = std::function<const char*(const char*)>;

// Applies GAR_LISTEN, GAR_INDEX, GAR_CONCEPTS, GAR_TOPICS, GAR_JOURNAL,
// GAR_SUBSTITUTIONS, GAR_GENERATORS (mock|http), GAR_GENERATOR_URL (all four
// endpoints) and GAR_SEED on top of `cfg`.
void apply_env_overrides(ServiceConfig& cfg, const EnvLookup& env);
void apply_env_overrides(ServiceConfig& cfg);

// Reads `path` (if non-empty), parses it and applies environment overrides.
ServiceConfig load_service_config(const std::string& path);

}  // namespace gar
