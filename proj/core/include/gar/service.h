// Copyright 2026 The GAR Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "gar/concept_bank.h"
#include "gar/embedding_index.h"
#include "gar/generation.h"
#include "gar/service_config.h"
#include "gar/text.h"

// JSON-over-HTTP facade for the manual-query workflow.
//
//   GET  /healthz
//   GET  /topics
//   GET  /concepts/oov?q=...
//   POST /topics/{id}/variants        {"channels"?, "n_t2t"?, "n_images"?, "seed"?}
//   GET  /sessions/{id}
//   GET  /sessions/{id}/images/{i}    provenance text of a generated image
//   POST /sessions/{id}/select        {"channel", "candidate_index" | "edited_text"}
//   POST /search                      {"text" | "variant_set" | "session_id", "k"?,
//                                      "channels"?, "fusion"?}
//   POST /runs/manual-export          {"session_ids", "run_tag", "k"?, "fusion"?}
//   POST /fuse                        {"runs": [run text], "weights"?, "normalization"?,
//                                      "cutoff"?, "tag"}
//   POST /eval                        {"run": run text, "qrels": qrels text, "metric"?}
//
// Errors are {"error": code, "detail": text}.
namespace gar {

struct ServiceResources {
  std::shared_ptr<const EmbeddingStore> store;  // null: search answers 503
  std::shared_ptr<const ConceptBank> bank;      // null: OOV checks answer 503
  std::vector<Topic> topics;
  GeneratorClients clients;
  GeneratorConfig generator;
  std::string journal_path;
};

// Loads the store, bank, topics and generator clients named by `cfg`.
ServiceResources load_resources(const ServiceConfig& cfg);

struct HttpRequest {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct HttpResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

class Service {
 public:
  // Replays the session journal when one is configured.
  explicit Service(ServiceResources resources);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Thread-safe. Mutations of one session are serialized.
  HttpResponse handle(const HttpRequest& request);

  std::size_t session_count() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds (port 0 picks an ephemeral port), serves on a background thread and
  // returns the bound port.
  int start(const std::string& host, int port = 0);
  // Blocks until stop() is called from another thread.
  void wait();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace gar
