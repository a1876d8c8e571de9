// Copyright 2026 The GAR Authors
// Licensed under the Apache License, Version 2.0

#include "gar/http_generators.h"

#include <condition_variable>
#include <mutex>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "gar/base64.h"
#include "gar/error.h"

namespace gar {
namespace {

using nlohmann::json;

class InFlightLimiter {
 public:
  explicit InFlightLimiter(std::size_t cap) : cap_(cap) {}

  void acquire() {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return active_ < cap_; });
    ++active_;
  }

  void release() {
    {
      std::lock_guard lock(mu_);
      --active_;
    }
    cv_.notify_one();
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  std::size_t cap_;
  std::size_t active_ = 0;
};

// One endpoint: base URL plus its concurrency cap.
class Endpoint {
 public:
  Endpoint(std::string base_url, std::size_t cap, int timeout_seconds)
      : base_url_(std::move(base_url)), limiter_(cap), timeout_seconds_(timeout_seconds) {}

  json post(const std::string& path, const json& body) {
    limiter_.acquire();
    struct Release {
      InFlightLimiter& l;
      ~Release() { l.release(); }
    } release{limiter_};

    httplib::Client client(base_url_);
    client.set_connection_timeout(timeout_seconds_, 0);
    client.set_read_timeout(timeout_seconds_, 0);
    client.set_write_timeout(timeout_seconds_, 0);
    auto res = client.Post(path, body.dump(), "application/json");
    if (!res) {
      throw Error(ErrorCode::kGeneratorFailed,
                  base_url_ + path + ": " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
      throw Error(ErrorCode::kGeneratorFailed, base_url_ + path + ": HTTP " +
                                                   std::to_string(res->status) + " " + res->body);
    }
    try {
      return json::parse(res->body);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kGeneratorFailed, base_url_ + path + ": bad JSON: " + e.what());
    }
  }

 private:
  std::string base_url_;
  InFlightLimiter limiter_;
  int timeout_seconds_;
};

std::vector<EmbeddingVector> read_vectors(const json& doc, std::size_t expected) {
  auto vectors = doc.at("vectors").get<std::vector<EmbeddingVector>>();
  if (vectors.size() != expected) {
    throw Error(ErrorCode::kGeneratorFailed, "embedder returned " + std::to_string(vectors.size()) +
                                                 " vectors for " + std::to_string(expected) + " inputs");
  }
  return vectors;
}

template <typename F>
auto guarded(std::string_view what, F&& f) {
  try {
    return f();
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::kGeneratorFailed, std::string(what) + ": " + e.what());
  }
}

class HttpTextRewriter : public TextRewriter {
 public:
  explicit HttpTextRewriter(std::shared_ptr<Endpoint> ep) : ep_(std::move(ep)) {}
  std::vector<std::string> rephrase(const T2TRequest& r) override {
    return guarded("t2t", [&] {
      json body = {{"query", r.query}, {"concepts", r.concepts}, {"oov", r.oov}, {"n", r.n},
                   {"prompt", r.prompt}};
      return ep_->post("/t2t", body).at("texts").get<std::vector<std::string>>();
    });
  }

 private:
  std::shared_ptr<Endpoint> ep_;
};

class HttpImageGenerator : public ImageGenerator {
 public:
  explicit HttpImageGenerator(std::shared_ptr<Endpoint> ep) : ep_(std::move(ep)) {}
  std::vector<GeneratedImage> generate(const T2IRequest& r) override {
    return guarded("t2i", [&] {
      json body = {{"prompt", r.prompt}, {"n", r.n}, {"seed", r.seed}};
      const auto encoded = ep_->post("/t2i", body).at("images").get<std::vector<std::string>>();
      std::vector<GeneratedImage> images;
      for (std::size_t i = 0; i < encoded.size(); ++i) {
        images.push_back({base64_decode(encoded[i]), r.prompt, r.seed + i});
      }
      return images;
    });
  }

 private:
  std::shared_ptr<Endpoint> ep_;
};

class HttpCaptioner : public Captioner {
 public:
  explicit HttpCaptioner(std::shared_ptr<Endpoint> ep) : ep_(std::move(ep)) {}
  std::string caption(const GeneratedImage& image, int) override {
    return guarded("i2t", [&] {
      json body = {{"image", base64_encode(image.png)}};
      return ep_->post("/i2t", body).at("caption").get<std::string>();
    });
  }

 private:
  std::shared_ptr<Endpoint> ep_;
};

class HttpEmbedder : public Embedder {
 public:
  explicit HttpEmbedder(std::shared_ptr<Endpoint> ep) : ep_(std::move(ep)) {}
  std::vector<EmbeddingVector> embed_texts(const std::vector<std::string>& texts) override {
    return guarded("embed/text", [&] {
      return read_vectors(ep_->post("/embed/text", json{{"texts", texts}}), texts.size());
    });
  }
  std::vector<EmbeddingVector> embed_images(const std::vector<GeneratedImage>& images) override {
    return guarded("embed/image", [&] {
      std::vector<std::string> encoded;
      for (const auto& img : images) encoded.push_back(base64_encode(img.png));
      return read_vectors(ep_->post("/embed/image", json{{"images", encoded}}), images.size());
    });
  }

 private:
  std::shared_ptr<Endpoint> ep_;
};

WireResponse error_response(int status, std::string_view code, const std::string& detail) {
  return {status, json{{"error", code}, {"detail", detail}}.dump()};
}

}  // namespace

GeneratorClients make_http_clients(const GeneratorEndpoints& endpoints, std::size_t in_flight_cap,
                                   int timeout_seconds) {
  if (in_flight_cap == 0) throw Error(ErrorCode::kInvalidArgument, "in_flight_cap must be >= 1");
  auto make = [&](const std::string& url) {
    return url.empty() ? nullptr : std::make_shared<Endpoint>(url, in_flight_cap, timeout_seconds);
  };
  GeneratorClients clients;
  if (auto ep = make(endpoints.t2t)) clients.t2t = std::make_shared<HttpTextRewriter>(ep);
  if (auto ep = make(endpoints.t2i)) clients.t2i = std::make_shared<HttpImageGenerator>(ep);
  if (auto ep = make(endpoints.i2t)) clients.i2t = std::make_shared<HttpCaptioner>(ep);
  if (auto ep = make(endpoints.embed)) clients.embedder = std::make_shared<HttpEmbedder>(ep);
  return clients;
}

WireResponse handle_generator_request(std::string_view path, std::string_view body,
                                      const GeneratorClients& clients) {
  json req;
  try {
    req = json::parse(body);
  } catch (const json::exception& e) {
    return error_response(400, "BadRequest", e.what());
  }
  try {
    if (path == "/t2t" && clients.t2t) {
      T2TRequest r;
      r.query = req.at("query").get<std::string>();
      r.concepts = req.value("concepts", std::vector<std::string>{});
      r.oov = req.value("oov", std::vector<std::string>{});
      r.n = req.value("n", 1);
      r.prompt = req.value("prompt", std::string{});
      return {200, json{{"texts", clients.t2t->rephrase(r)}}.dump()};
    }
    if (path == "/t2i" && clients.t2i) {
      T2IRequest r;
      r.prompt = req.at("prompt").get<std::string>();
      r.n = req.value("n", 1);
      r.seed = req.value("seed", std::uint64_t{0});
      std::vector<std::string> encoded;
      for (const auto& img : clients.t2i->generate(r)) encoded.push_back(base64_encode(img.png));
      return {200, json{{"images", encoded}}.dump()};
    }
    if (path == "/i2t" && clients.i2t) {
      GeneratedImage image{base64_decode(req.at("image").get<std::string>()), {}, 0};
      return {200, json{{"caption", clients.i2t->caption(image, 0)}}.dump()};
    }
    if (path == "/embed/text" && clients.embedder) {
      const auto texts = req.at("texts").get<std::vector<std::string>>();
      return {200, json{{"vectors", clients.embedder->embed_texts(texts)}}.dump()};
    }
    if (path == "/embed/image" && clients.embedder) {
      std::vector<GeneratedImage> images;
      for (const auto& s : req.at("images").get<std::vector<std::string>>()) {
        images.push_back({base64_decode(s), {}, 0});
      }
      return {200, json{{"vectors", clients.embedder->embed_images(images)}}.dump()};
    }
  } catch (const json::exception& e) {
    return error_response(400, "BadRequest", e.what());
  } catch (const Error& e) {
    const int status = e.code() == ErrorCode::kBadFormat || e.code() == ErrorCode::kEmptyText ||
                               e.code() == ErrorCode::kInvalidArgument
                           ? 400
                           : 500;
    return error_response(status, error_code_name(e.code()), e.detail());
  }
  return error_response(404, "NotFound", "no generator route " + std::string(path));
}

struct GeneratorServer::Impl {
  GeneratorClients clients;
  httplib::Server server;
  std::thread thread;
};

GeneratorServer::GeneratorServer(GeneratorClients clients) : impl_(std::make_unique<Impl>()) {
  impl_->clients = std::move(clients);
  impl_->server.Post(R"(/(t2t|t2i|i2t|embed/text|embed/image))",
                     [this](const httplib::Request& req, httplib::Response& res) {
                       auto out = handle_generator_request(req.path, req.body, impl_->clients);
                       res.status = out.status;
                       res.set_content(out.body, "application/json");
                     });
}

GeneratorServer::~GeneratorServer() { stop(); }

int GeneratorServer::start(const std::string& host) {
  const int port = impl_->server.bind_to_any_port(host);
  if (port < 0) throw Error(ErrorCode::kIo, "cannot bind generator server on " + host);
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port;
}

void GeneratorServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace gar
