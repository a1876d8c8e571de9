// Copyright 2026 The GAR Authors
// Licensed under the Apache License, Version 2.0

#include "gar/service.h"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <regex>
#include <thread>

#include <httplib.h>

#include "gar/error.h"
#include "gar/evaluation.h"
#include "gar/file_io.h"
#include "gar/fusion.h"
#include "gar/json_codec.h"
#include "gar/mock_generators.h"
#include "gar/pipeline.h"
#include "gar/trec_io.h"

namespace gar {
namespace {

struct ApiError {
  int status;
  std::string code;
  std::string detail;
  Json extra = Json::object();
};

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotFound:
      return 404;
    case ErrorCode::kOovViolation:
    case ErrorCode::kIncompleteSelections:
      return 409;
    case ErrorCode::kAllChannelsFailed:
    case ErrorCode::kGeneratorFailed:
      return 502;
    case ErrorCode::kStoreUnavailable:
      return 503;
    case ErrorCode::kIo:
      return 500;
    default:
      return 400;
  }
}

HttpResponse error_response(int status, std::string_view code, std::string_view detail,
                            const Json& extra = Json::object()) {
  Json doc = {{"error", code}, {"detail", detail}};
  for (const auto& [k, v] : extra.items()) doc[k] = v;
  return {status, doc.dump(), "application/json"};
}

HttpResponse json_response(const Json& doc) { return {200, doc.dump(), "application/json"}; }

HttpResponse text_response(std::string body) {
  return {200, std::move(body), "text/plain; charset=utf-8"};
}

[[noreturn]] void bad_request(std::string detail) {
  throw ApiError{400, "BadRequest", std::move(detail)};
}

Json parse_body(const std::string& body) {
  if (trim(body).empty()) return Json::object();
  try {
    auto doc = Json::parse(body);
    if (!doc.is_object()) bad_request("request body must be a JSON object");
    return doc;
  } catch (const Json::exception& e) {
    bad_request(std::string("malformed JSON: ") + e.what());
  }
}

std::string require_string(const Json& doc, const char* key) {
  if (!doc.contains(key) || !doc.at(key).is_string()) {
    bad_request(std::string("'") + key + "' must be a string");
  }
  return doc.at(key).get<std::string>();
}

std::size_t read_k(const Json& doc) {
  if (!doc.contains("k")) return kDefaultCutoff;
  const auto& k = doc.at("k");
  if (!k.is_number_integer() || k.get<long long>() < 0) bad_request("'k' must be an integer >= 0");
  return k.get<std::size_t>();
}

std::set<Channel> read_channels(const Json& doc, std::set<Channel> fallback) {
  if (!doc.contains("channels")) return fallback;
  const auto& c = doc.at("channels");
  if (c.is_string()) return parse_channel_list(c.get<std::string>());
  if (!c.is_array()) bad_request("'channels' must be an array or a comma-separated string");
  std::set<Channel> out;
  for (const auto& name : c) {
    if (!name.is_string()) bad_request("'channels' entries must be strings");
    out.insert(parse_channel(name.get<std::string>()));
  }
  return out;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Selection {
  int candidate_index = -1;
  bool edited = false;
  std::string text;
};

struct Session {
  std::mutex mu;
  std::string id;
  std::string created_at;
  QueryVariantSet variants;
  std::map<Channel, Selection> selections;
};

struct SessionSnapshot {
  std::string id;
  QueryVariantSet variants;
  std::map<Channel, Selection> selections;
};

std::size_t candidate_count(const QueryVariantSet& v, Channel channel) {
  switch (channel) {
    case Channel::kOriginal: return 1;
    case Channel::kT2T: return v.t2t_texts.size();
    case Channel::kT2I: return v.t2i_images.size();
    case Channel::kI2T: return v.i2t_captions.size();
  }
  return 0;
}

std::string candidate_text(const QueryVariantSet& v, Channel channel, std::size_t i) {
  switch (channel) {
    case Channel::kOriginal: return v.topic.text;
    case Channel::kT2T: return v.t2t_texts[i];
    case Channel::kT2I: return v.t2i_images[i].provenance_prompt;
    case Channel::kI2T: return v.i2t_captions[i];
  }
  return {};
}

void apply_selection(Session& session, const Json& body) {
  const auto channel = parse_channel(require_string(body, "channel"));
  const bool has_index = body.contains("candidate_index");
  const bool has_edit = body.contains("edited_text");
  if (has_index == has_edit) bad_request("give exactly one of 'candidate_index' or 'edited_text'");
  Selection sel;
  if (has_index) {
    const auto& idx = body.at("candidate_index");
    const auto n = candidate_count(session.variants, channel);
    if (!idx.is_number_integer() || idx.get<long long>() < 0 ||
        static_cast<std::size_t>(idx.get<long long>()) >= n) {
      bad_request("candidate_index " + idx.dump() + " out of range for " +
                  std::string(channel_name(channel)) + " (" + std::to_string(n) + " candidates)");
    }
    sel.candidate_index = idx.get<int>();
    sel.text = candidate_text(session.variants, channel, sel.candidate_index);
  } else {
    if (channel == Channel::kT2I) bad_request("t2i selections cannot be edited");
    sel.text = std::string(trim(require_string(body, "edited_text")));
    if (sel.text.empty()) bad_request("'edited_text' is empty");
    sel.edited = true;
  }
  session.selections[channel] = std::move(sel);
}

}  // namespace

ServiceResources load_resources(const ServiceConfig& cfg) {
  validate(cfg.generator);
  ServiceResources res;
  if (!cfg.index_path.empty()) {
    res.store = std::make_shared<EmbeddingStore>(EmbeddingStore::parse(read_file(cfg.index_path)));
  }
  if (!cfg.concepts_path.empty()) {
    res.bank = std::make_shared<ConceptBank>(
        ConceptBank::parse(read_file(cfg.concepts_path), cfg.concepts_path));
  }
  res.topics = cfg.topics_path.empty() ? mock::tv24_topics() : parse_topics(read_file(cfg.topics_path));
  if (cfg.mock) {
    mock::MockOptions opts;
    opts.dim = res.store ? res.store->dim() : cfg.dim;
    if (!cfg.substitutions_path.empty()) {
      opts.substitutions = mock::parse_substitution_table(read_file(cfg.substitutions_path));
    }
    res.clients = mock::make_mock_clients(opts);
  } else {
    res.clients = make_http_clients(cfg.endpoints, cfg.generator.in_flight_cap);
  }
  res.generator = cfg.generator;
  res.journal_path = cfg.journal_path;
  return res;
}

struct Service::Impl {
  ServiceResources res;
  mutable std::mutex sessions_mu;
  std::map<std::string, std::shared_ptr<Session>> sessions;
  std::uint64_t next_session = 1;
  std::mutex journal_mu;

  // Journal.

  void journal(const Json& record) {
    if (res.journal_path.empty()) return;
    std::lock_guard lock(journal_mu);
    std::ofstream out(res.journal_path, std::ios::binary | std::ios::app);
    out << record.dump() << '\n';
    out.flush();
    if (!out) throw Error(ErrorCode::kIo, "cannot append to journal " + res.journal_path);
  }

  void replay() {
    if (res.journal_path.empty() || !std::filesystem::exists(res.journal_path)) return;
    const std::string text = read_file(res.journal_path);
    std::size_t pos = 0;
    std::size_t line = 0;
    while (pos < text.size()) {
      const auto nl = text.find('\n', pos);
      ++line;
      if (nl == std::string::npos) break;  // torn final record
      const auto record = Json::parse(text.substr(pos, nl - pos), nullptr, false);
      pos = nl + 1;
      if (record.is_discarded()) throw Error(ErrorCode::kBadFormat, "journal record", line);
      const auto op = record.value("op", std::string{});
      if (op == "create") {
        auto s = std::make_shared<Session>();
        s->id = record.at("session_id").get<std::string>();
        s->created_at = record.value("created_at", std::string{});
        s->variants = decode_variants(record.at("variants"));
        sessions[s->id] = s;
        if (s->id.size() > 1) {
          next_session = std::max<std::uint64_t>(next_session, std::stoull(s->id.substr(1)) + 1);
        }
      } else if (op == "select") {
        const auto it = sessions.find(record.at("session_id").get<std::string>());
        if (it == sessions.end()) throw Error(ErrorCode::kBadFormat, "journal: unknown session", line);
        apply_selection(*it->second, record.at("selection"));
      } else {
        throw Error(ErrorCode::kBadFormat, "journal: unknown op '" + op + "'", line);
      }
    }
  }

  // Sessions.

  std::shared_ptr<Session> find_session(const std::string& id) const {
    std::lock_guard lock(sessions_mu);
    const auto it = sessions.find(id);
    if (it == sessions.end()) throw ApiError{404, "NotFound", "unknown session " + id};
    return it->second;
  }

  SessionSnapshot snapshot(const std::string& id) const {
    auto s = find_session(id);
    std::lock_guard lock(s->mu);
    return {s->id, s->variants, s->selections};
  }

  Json encode_selection(Channel channel, const Selection& sel) const {
    Json oov = Json::array();
    if (res.bank && channel != Channel::kT2I) oov = encode_oov(detect_oov(sel.text, *res.bank));
    return {{"candidate_index", sel.candidate_index < 0 ? Json(nullptr) : Json(sel.candidate_index)},
            {"edited", sel.edited},
            {"text", sel.text},
            {"oov", oov}};
  }

  Json encode_session(const Session& s) const {
    Json selections = Json::object();
    for (const auto& [channel, sel] : s.selections) {
      selections[std::string(channel_name(channel))] = encode_selection(channel, sel);
    }
    return {{"session_id", s.id},
            {"topic_id", s.variants.topic.topic_id},
            {"created_at", s.created_at},
            {"variants", encode_variants(s.variants, res.bank.get())},
            {"selections", selections}};
  }

  // Search helpers.

  void require_store() const {
    if (!res.store) throw Error(ErrorCode::kStoreUnavailable, "no embedding store loaded");
    if (!res.clients.embedder) throw Error(ErrorCode::kStoreUnavailable, "no embedder configured");
  }

  std::vector<std::pair<Channel, ScoredList>> selection_lists(const SessionSnapshot& s, std::size_t k,
                                                              const FusionSpec& fusion) const {
    std::vector<std::pair<Channel, ScoredList>> out;
    const int topic = s.variants.topic.topic_id;
    auto& embedder = *res.clients.embedder;
    for (const auto& [channel, sel] : s.selections) {
      if (channel == Channel::kT2I) {
        out.emplace_back(channel, search_image_variant({s.variants.t2i_images[sel.candidate_index]},
                                                       *res.store, k, embedder, topic, fusion));
      } else {
        out.emplace_back(channel, search_text_variant(sel.text, *res.store, k, embedder,
                                                      channel_name(channel), topic));
      }
    }
    return out;
  }

  static ScoredList fuse_lists(const std::vector<std::pair<Channel, ScoredList>>& lists,
                               const Json& fusion_doc, std::size_t k) {
    std::vector<ScoredList> inputs;
    for (const auto& [channel, list] : lists) inputs.push_back(list);
    if (inputs.empty()) throw Error(ErrorCode::kNoLists, "no channel produced a result list");
    FusionSpec spec = decode_fusion_spec(fusion_doc, inputs.size());
    if (fusion_doc.is_object() && fusion_doc.contains("weights")) {
      spec.cutoff = k;
      auto fused = fuse(inputs, spec);
      fused.source_tag = "fused";
      return fused;
    }
    return combine_equal(std::move(inputs), spec, k, "fused");
  }

  static Json search_response(const std::vector<std::pair<Channel, ScoredList>>& lists,
                              const ScoredList& fused, const std::vector<std::string>& warnings) {
    Json channels = Json::object();
    for (const auto& [channel, list] : lists) {
      channels[std::string(channel_name(channel))] = encode_list(list);
    }
    return {{"channels", channels}, {"fused", encode_list(fused)}, {"warnings", warnings}};
  }

  // Handlers.

  HttpResponse healthz() const {
    Json doc = {{"status", "ok"},
                {"store_size", res.store ? Json(res.store->size()) : Json(nullptr)},
                {"dim", res.store ? Json(res.store->dim()) : Json(nullptr)},
                {"bank_size", res.bank ? Json(res.bank->size()) : Json(nullptr)},
                {"topics", res.topics.size()},
                {"sessions", session_count()}};
    return json_response(doc);
  }

  HttpResponse topics() const {
    Json out = Json::array();
    for (const auto& t : res.topics) {
      Json row = {{"topic_id", t.topic_id}, {"text", t.text}};
      if (res.bank) row["oov"] = encode_oov(detect_oov(t.text, *res.bank));
      out.push_back(row);
    }
    return json_response(out);
  }

  HttpResponse oov(const HttpRequest& req) const {
    const auto it = req.query.find("q");
    if (it == req.query.end()) bad_request("missing query parameter 'q'");
    if (!res.bank) throw Error(ErrorCode::kStoreUnavailable, "no concept bank loaded");
    return json_response({{"query", it->second}, {"oov", encode_oov(detect_oov(it->second, *res.bank))}});
  }

  HttpResponse variants(int topic_id, const Json& body) {
    const auto topic = std::find_if(res.topics.begin(), res.topics.end(),
                                    [&](const Topic& t) { return t.topic_id == topic_id; });
    if (topic == res.topics.end()) {
      throw ApiError{404, "NotFound", "unknown topic " + std::to_string(topic_id)};
    }
    GeneratorConfig g = res.generator;
    if (body.contains("channels")) {
      const auto channels = read_channels(body, {});
      g.enable_t2t = channels.count(Channel::kT2T) > 0;
      g.enable_t2i = channels.count(Channel::kT2I) > 0;
      g.enable_i2t = channels.count(Channel::kI2T) > 0;
    }
    if (body.contains("n_t2t")) g.n_t2t = body.at("n_t2t").get<int>();
    if (body.contains("n_images")) g.n_images = body.at("n_images").get<int>();
    if (body.contains("seed")) g.seed = body.at("seed").get<std::uint64_t>();
    auto v = generate_variants(*topic, g, res.clients, res.bank.get());

    auto s = std::make_shared<Session>();
    s->created_at = utc_timestamp();
    s->variants = std::move(v);
    {
      std::lock_guard lock(sessions_mu);
      char id[32];
      std::snprintf(id, sizeof id, "s%06llu", static_cast<unsigned long long>(next_session++));
      s->id = id;
      sessions[s->id] = s;
    }
    journal({{"op", "create"},
             {"session_id", s->id},
             {"created_at", s->created_at},
             {"variants", encode_variants(s->variants, nullptr)}});
    return json_response(encode_session(*s));
  }

  HttpResponse get_session(const std::string& id) const {
    auto s = find_session(id);
    std::lock_guard lock(s->mu);
    return json_response(encode_session(*s));
  }

  HttpResponse image(const std::string& id, std::size_t index) const {
    const auto snap = snapshot(id);
    if (index >= snap.variants.t2i_images.size()) {
      throw ApiError{404, "NotFound", "session " + id + " has no image " + std::to_string(index)};
    }
    return text_response(snap.variants.t2i_images[index].provenance_prompt);
  }

  HttpResponse select(const std::string& id, const Json& body) {
    auto s = find_session(id);
    std::lock_guard lock(s->mu);
    Session trial;
    trial.variants = s->variants;
    apply_selection(trial, body);
    journal({{"op", "select"}, {"session_id", id}, {"selection", body}});
    for (auto& [channel, sel] : trial.selections) s->selections[channel] = std::move(sel);
    return json_response(encode_session(*s));
  }

  HttpResponse search(const Json& body) {
    require_store();
    const std::size_t k = read_k(body);
    const Json fusion_doc = body.contains("fusion") ? body.at("fusion") : Json(nullptr);
    const FusionSpec list_fusion = decode_fusion_spec(fusion_doc, 1);
    std::vector<std::pair<Channel, ScoredList>> lists;
    std::vector<std::string> warnings;
    if (body.contains("session_id")) {
      const auto snap = snapshot(require_string(body, "session_id"));
      if (snap.selections.empty()) {
        throw Error(ErrorCode::kIncompleteSelections, "session " + snap.id + " has no selections");
      }
      lists = selection_lists(snap, k, list_fusion);
    } else if (body.contains("variant_set")) {
      const auto v = decode_variants(body.at("variant_set"));
      const std::set<Channel> all{Channel::kOriginal, Channel::kT2T, Channel::kT2I, Channel::kI2T};
      auto by_channel = search_variant_set(v, read_channels(body, all), *res.store, k,
                                           *res.clients.embedder, list_fusion, warnings);
      for (auto& [channel, list] : by_channel) lists.emplace_back(channel, std::move(list));
    } else if (body.contains("text")) {
      const int topic = body.value("topic_id", 0);
      lists.emplace_back(Channel::kOriginal,
                         search_text_variant(require_string(body, "text"), *res.store, k,
                                             *res.clients.embedder, "original", topic));
    } else {
      bad_request("give one of 'text', 'variant_set' or 'session_id'");
    }
    const auto fused = fuse_lists(lists, fusion_doc, k);
    return json_response(search_response(lists, fused, warnings));
  }

  HttpResponse manual_export(const Json& body) {
    const auto tag = require_string(body, "run_tag");
    if (!is_valid_run_tag(tag)) bad_request("run_tag must be non-empty without whitespace");
    if (!body.contains("session_ids") || !body.at("session_ids").is_array() ||
        body.at("session_ids").empty()) {
      bad_request("'session_ids' must be a non-empty array");
    }
    const std::size_t k = read_k(body);
    const Json fusion_doc = body.contains("fusion") ? body.at("fusion") : Json(nullptr);
    const FusionSpec list_fusion = decode_fusion_spec(fusion_doc, 1);
    if (!res.bank) throw Error(ErrorCode::kStoreUnavailable, "no concept bank loaded");
    require_store();

    std::vector<SessionSnapshot> snaps;
    for (const auto& id : body.at("session_ids")) {
      if (!id.is_string()) bad_request("'session_ids' entries must be strings");
      snaps.push_back(snapshot(id.get<std::string>()));
    }

    Json incomplete = Json::array();
    for (const auto& s : snaps) {
      if (s.selections.empty()) incomplete.push_back(s.id);
    }
    if (!incomplete.empty()) {
      throw ApiError{409, "IncompleteSelections", "sessions without a selection: " + incomplete.dump(),
                     {{"sessions", incomplete}}};
    }

    Json violations = Json::array();
    std::set<std::string> all_terms;
    std::string detail;
    for (const auto& s : snaps) {
      for (const auto& [channel, sel] : s.selections) {
        if (channel == Channel::kT2I) continue;
        const auto terms = detect_oov(sel.text, *res.bank);
        if (terms.empty()) continue;
        all_terms.insert(terms.begin(), terms.end());
        std::string listed;
        for (const auto& t : terms) listed += (listed.empty() ? "" : ", ") + t;
        if (!detail.empty()) detail += "; ";
        detail += "topic " + std::to_string(s.variants.topic.topic_id) + " " +
                  std::string(channel_name(channel)) + ": " + listed;
        violations.push_back({{"session_id", s.id},
                              {"topic_id", s.variants.topic.topic_id},
                              {"channel", channel_name(channel)},
                              {"terms", encode_oov(terms)}});
      }
    }
    if (!violations.empty()) {
      throw ApiError{409, "OovViolation", detail,
                     {{"terms", encode_oov(all_terms)}, {"violations", violations}}};
    }

    Run run{tag, {}};
    for (const auto& s : snaps) {
      const int topic = s.variants.topic.topic_id;
      if (run.lists.count(topic)) {
        throw Error(ErrorCode::kDuplicateTopic, "two sessions for topic " + std::to_string(topic));
      }
      auto fused = fuse_lists(selection_lists(s, k, list_fusion), fusion_doc, k);
      fused.topic_id = topic;
      fused.source_tag = tag;
      run.lists[topic] = std::move(fused);
    }
    return text_response(write_run(run));
  }

  HttpResponse fuse_endpoint(const Json& body) {
    if (!body.contains("runs") || !body.at("runs").is_array() || body.at("runs").empty()) {
      bad_request("'runs' must be a non-empty array of run files");
    }
    const auto tag = require_string(body, "tag");
    if (!is_valid_run_tag(tag)) bad_request("tag must be non-empty without whitespace");
    std::vector<Run> runs;
    for (const auto& text : body.at("runs")) {
      if (!text.is_string()) bad_request("'runs' entries must be strings");
      runs.push_back(read_run(text.get<std::string>()));
    }
    const auto spec = decode_fusion_spec(body, runs.size());
    return text_response(write_run(fuse_runs(runs, spec, tag)));
  }

  HttpResponse eval(const Json& body) {
    const auto run = read_run(require_string(body, "run"));
    const auto qrels = parse_qrels(require_string(body, "qrels"));
    const auto metric_name = to_lower(body.value("metric", std::string("xinfap")));
    Metric metric;
    if (metric_name == "xinfap") {
      metric = Metric::kXinfAP;
    } else if (metric_name == "ap") {
      metric = Metric::kAP;
    } else {
      bad_request("metric must be xinfap or ap");
    }
    EvalConfig cfg;
    if (body.contains("epsilon")) cfg.epsilon = body.at("epsilon").get<double>();
    return json_response(encode_report(evaluate_run(run, qrels, cfg, metric)));
  }

  std::size_t session_count() const {
    std::lock_guard lock(sessions_mu);
    return sessions.size();
  }

  HttpResponse route(const HttpRequest& req) {
    static const std::regex kVariants(R"(^/topics/(\d+)/variants$)");
    static const std::regex kSession(R"(^/sessions/([^/]+)$)");
    static const std::regex kSelect(R"(^/sessions/([^/]+)/select$)");
    static const std::regex kImage(R"(^/sessions/([^/]+)/images/(\d+)$)");
    const bool get = req.method == "GET";
    const bool post = req.method == "POST";
    auto wrong_method = [&] {
      return error_response(405, "MethodNotAllowed", req.method + " " + req.path);
    };
    std::smatch m;
    const std::string& path = req.path;
    if (path == "/healthz") return get ? healthz() : wrong_method();
    if (path == "/topics") return get ? topics() : wrong_method();
    if (path == "/concepts/oov") return get ? oov(req) : wrong_method();
    if (path == "/search") return post ? search(parse_body(req.body)) : wrong_method();
    if (path == "/runs/manual-export") return post ? manual_export(parse_body(req.body)) : wrong_method();
    if (path == "/fuse") return post ? fuse_endpoint(parse_body(req.body)) : wrong_method();
    if (path == "/eval") return post ? eval(parse_body(req.body)) : wrong_method();
    if (std::regex_match(path, m, kVariants)) {
      if (!post) return wrong_method();
      int id = 0;
      try {
        id = std::stoi(m[1].str());
      } catch (const std::exception&) {
        throw ApiError{404, "NotFound", "unknown topic " + m[1].str()};
      }
      return variants(id, parse_body(req.body));
    }
    if (std::regex_match(path, m, kSelect)) {
      return post ? select(m[1].str(), parse_body(req.body)) : wrong_method();
    }
    if (std::regex_match(path, m, kImage)) {
      return get ? image(m[1].str(), std::stoul(m[2].str())) : wrong_method();
    }
    if (std::regex_match(path, m, kSession)) return get ? get_session(m[1].str()) : wrong_method();
    return error_response(404, "NotFound", "no route " + req.method + " " + path);
  }
};

Service::Service(ServiceResources resources) : impl_(std::make_unique<Impl>()) {
  impl_->res = std::move(resources);
  impl_->replay();
}

Service::~Service() = default;

HttpResponse Service::handle(const HttpRequest& request) {
  try {
    return impl_->route(request);
  } catch (const ApiError& e) {
    return error_response(e.status, e.code, e.detail, e.extra);
  } catch (const Error& e) {
    std::string detail = e.detail();
    if (e.line() > 0) detail = "line " + std::to_string(e.line()) + ": " + detail;
    return error_response(status_for(e.code()), error_code_name(e.code()), detail);
  } catch (const Json::exception& e) {
    return error_response(400, "BadRequest", e.what());
  } catch (const std::exception& e) {
    return error_response(500, "Internal", e.what());
  }
}

std::size_t Service::session_count() const { return impl_->session_count(); }

struct HttpServer::Impl {
  Service& service;
  httplib::Server server;
  std::thread thread;
  std::mutex mu;
  std::condition_variable cv;
  bool stopped = false;

  explicit Impl(Service& s) : service(s) {}
};

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>(service)) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    HttpRequest request{req.method, req.path, {}, req.body};
    for (const auto& [k, v] : req.params) request.query.emplace(k, v);
    const auto out = impl_->service.handle(request);
    res.status = out.status;
    res.set_content(out.body, out.content_type);
  };
  impl_->server.Get(".*", handler);
  impl_->server.Post(".*", handler);
  impl_->server.Put(".*", handler);
  impl_->server.Delete(".*", handler);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) throw Error(ErrorCode::kIo, "cannot bind " + host + ":" + std::to_string(port));
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void HttpServer::wait() {
  std::unique_lock lock(impl_->mu);
  impl_->cv.wait(lock, [this] { return impl_->stopped; });
}

void HttpServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
  {
    std::lock_guard lock(impl_->mu);
    impl_->stopped = true;
  }
  impl_->cv.notify_all();
}

}  // namespace gar
