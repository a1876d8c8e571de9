// Copyright 2026 The GAR Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>

#include "gar/generation.h"

// Generator wire protocol (HTTP/1.1, JSON, UTF-8):
//   POST /t2t          {"query","concepts","oov","n","prompt"} -> {"texts"}
//   POST /t2i          {"prompt","n","seed"}                   -> {"images": [base64 PNG]}
//   POST /i2t          {"image": base64 PNG}                   -> {"caption"}
//   POST /embed/text   {"texts"}                               -> {"vectors"}
//   POST /embed/image  {"images": [base64 PNG]}                -> {"vectors"}
namespace gar {

// Base URLs such as "http://127.0.0.1:9000". An empty URL leaves that client
// unset.
struct GeneratorEndpoints {
  std::string t2t;
  std::string t2i;
  std::string i2t;
  std::string embed;
};

// HTTP-backed clients. At most `in_flight_cap` requests run concurrently per
// endpoint.
GeneratorClients make_http_clients(const GeneratorEndpoints& endpoints,
                                   std::size_t in_flight_cap = 4, int timeout_seconds = 120);

struct WireResponse {
  int status = 200;
  std::string body;
};

// Server side of the wire protocol backed by in-process clients (usually the
// mocks). Errors come back as {"error", "detail"} with a 4xx/5xx status.
WireResponse handle_generator_request(std::string_view path, std::string_view body,
                                      const GeneratorClients& clients);

// Serves handle_generator_request on a background thread.
class GeneratorServer {
 public:
  explicit GeneratorServer(GeneratorClients clients);
  ~GeneratorServer();
  GeneratorServer(const GeneratorServer&) = delete;
  GeneratorServer& operator=(const GeneratorServer&) = delete;

  // Binds to an ephemeral port on `host` and starts serving. Returns the port.
  int start(const std::string& host = "127.0.0.1");
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace gar
