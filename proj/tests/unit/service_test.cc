// Copyright 2026 The GAR Authors
// Licensed under the Apache License, Version 2.0

#include "gar/service.h"

#include <fstream>
#include <thread>

#include <gtest/gtest.h>
#include <httplib.h>

#include "gar/json_codec.h"
#include "gar/mock_generators.h"
#include "gar/trec_io.h"
#include "oracles.h"
#include "synthetic_corpus.h"
#include "temp_dir.h"

namespace gar {
namespace {

ServiceResources make_resources(const std::string& journal = {}, bool with_store = true) {
  ServiceResources r;
  if (with_store) r.store = std::make_shared<const EmbeddingStore>(testing::synthetic_store());
  r.bank = std::make_shared<const ConceptBank>(ConceptBank::from_terms(
      {"bald", "man", "glasses", "rainy", "day", "outdoors", "two", "women", "hats"}));
  r.topics = mock::tv24_topics();
  mock::MockOptions options;
  r.clients = mock::make_mock_clients(options);
  r.generator.n_images = 2;
  r.journal_path = journal;
  return r;
}

struct Reply {
  int status;
  Json body;
  std::string text;
};

Reply call(Service& service, const std::string& method, const std::string& path,
           const Json& body = Json(), std::map<std::string, std::string> query = {}) {
  const auto res = service.handle({method, path, std::move(query), body.is_null() ? "" : body.dump()});
  Reply out{res.status, Json(), res.body};
  if (res.content_type == "application/json") out.body = Json::parse(res.body);
  return out;
}

ScoredList oracle_search(const EmbeddingStore& store, const std::string& text, std::size_t k) {
  std::vector<std::vector<float>> vectors;
  for (std::size_t i = 0; i < store.size(); ++i) {
    const auto v = store.vector(i);
    vectors.emplace_back(v.begin(), v.end());
  }
  ScoredList out;
  for (const auto& h : testing::brute_force_knn(store.ids(), vectors,
                                                token_hash_embed(text, store.dim()), k)) {
    out.entries.push_back({h.shot_id, h.score});
  }
  return out;
}

std::string new_session(Service& service, int topic, const Json& body = Json::object()) {
  const auto r = call(service, "POST", "/topics/" + std::to_string(topic) + "/variants", body);
  EXPECT_EQ(r.status, 200) << r.text;
  return r.body.at("session_id").get<std::string>();
}

TEST(Service, HealthAndTopics) {
  Service service(make_resources());
  EXPECT_EQ(call(service, "GET", "/healthz").body.at("status"), "ok");
  const auto topics = call(service, "GET", "/topics").body;
  ASSERT_EQ(topics.size(), 20u);
  EXPECT_EQ(topics[0].at("topic_id"), 751);
  EXPECT_EQ(topics[0].at("text"), "A bald man with glasses");
  const auto oov = call(service, "GET", "/concepts/oov", Json(), {{"q", "a bald man with spectacles"}});
  EXPECT_EQ(oov.body.at("oov"), Json::parse(R"(["spectacles"])"));
  EXPECT_EQ(call(service, "POST", "/healthz").status, 405);
  EXPECT_EQ(call(service, "GET", "/nope").status, 404);
}

TEST(Service, VariantsForTopic751) {
  Service service(make_resources());
  const auto r = call(service, "POST", "/topics/751/variants", Json::object());
  ASSERT_EQ(r.status, 200);
  const auto& v = r.body.at("variants");
  EXPECT_EQ(v.at("topic").at("text"), "A bald man with glasses");
  EXPECT_EQ(v.at("i2t").at(0).at("text"), "a man with glasses and a bald head");
  EXPECT_EQ(v.at("t2i").size(), 2u);
  EXPECT_EQ(service.session_count(), 1u);
  const auto id = r.body.at("session_id").get<std::string>();
  const auto image = call(service, "GET", "/sessions/" + id + "/images/0");
  EXPECT_EQ(image.text, "A bald man with glasses, photorealistic video still");
  EXPECT_EQ(call(service, "GET", "/sessions/" + id + "/images/9").status, 404);
}

TEST(Service, UnknownTopicAndDisabledChannels) {
  Service service(make_resources());
  const auto missing = call(service, "POST", "/topics/999/variants", Json::object());
  EXPECT_EQ(missing.status, 404);
  EXPECT_EQ(missing.body.at("error"), "NotFound");
  const auto only_original =
      call(service, "POST", "/topics/751/variants", Json::parse(R"({"channels":["original"]})"));
  EXPECT_EQ(only_original.status, 200);
  EXPECT_TRUE(only_original.body.at("variants").at("t2t").empty());
}

TEST(Service, TextSearchMatchesBruteForce) {
  auto res = make_resources();
  const auto store = res.store;
  Service service(std::move(res));
  const auto r = call(service, "POST", "/search", Json::parse(R"({"text":"a red car","k":5})"));
  ASSERT_EQ(r.status, 200) << r.text;
  const auto fused = decode_list(r.body.at("fused"));
  EXPECT_EQ(fused.entries, oracle_search(*store, "a red car", 5).entries);
  EXPECT_EQ(decode_list(r.body.at("channels").at("original")).entries, fused.entries);
  const auto empty = call(service, "POST", "/search", Json::parse(R"({"text":"a red car","k":0})"));
  EXPECT_TRUE(empty.body.at("fused").at("hits").empty());
}

TEST(Service, SessionSearchUsesSelection) {
  auto res = make_resources();
  const auto store = res.store;
  Service service(std::move(res));
  const auto id = new_session(service, 770);
  EXPECT_EQ(call(service, "POST", "/search", Json{{"session_id", id}}).status, 409);
  const auto sel = call(service, "POST", "/sessions/" + id + "/select",
                        Json{{"channel", "t2t"}, {"candidate_index", 0}});
  ASSERT_EQ(sel.status, 200) << sel.text;
  EXPECT_EQ(sel.body.at("selections").at("t2t").at("text"), "Two women wearing stylish hats outside");
  EXPECT_EQ(sel.body.at("selections").at("t2t").at("edited"), false);
  const auto r = call(service, "POST", "/search", Json{{"session_id", id}, {"k", 10}});
  ASSERT_EQ(r.status, 200) << r.text;
  EXPECT_EQ(decode_list(r.body.at("fused")).entries,
            oracle_search(*store, "Two women wearing stylish hats outside", 10).entries);
}

TEST(Service, SelectValidation) {
  Service service(make_resources());
  const auto id = new_session(service, 770);
  const std::string path = "/sessions/" + id + "/select";
  const auto edited = call(service, "POST", path, Json{{"channel", "i2t"}, {"edited_text", " two women "}});
  EXPECT_EQ(edited.body.at("selections").at("i2t").at("edited"), true);
  EXPECT_EQ(edited.body.at("selections").at("i2t").at("text"), "two women");
  EXPECT_EQ(call(service, "POST", path, Json{{"channel", "t2t"}, {"candidate_index", 99}}).status, 400);
  EXPECT_EQ(call(service, "POST", path, Json{{"channel", "t2t"}}).status, 400);
  EXPECT_EQ(call(service, "POST", path,
                 Json{{"channel", "t2t"}, {"candidate_index", 0}, {"edited_text", "x"}})
                .status,
            400);
  EXPECT_EQ(call(service, "POST", path, Json{{"channel", "t2i"}, {"edited_text", "x"}}).status, 400);
  EXPECT_EQ(call(service, "POST", "/sessions/s999999/select",
                 Json{{"channel", "t2t"}, {"candidate_index", 0}})
                .status,
            404);
}

TEST(Service, ManualExport) {
  Service service(make_resources());
  const auto a = new_session(service, 751);
  const auto b = new_session(service, 752);
  const Json export_body{{"session_ids", {a, b}}, {"run_tag", "manual"}, {"k", 10}};
  const auto incomplete = call(service, "POST", "/runs/manual-export", export_body);
  EXPECT_EQ(incomplete.status, 409);
  EXPECT_EQ(incomplete.body.at("error"), "IncompleteSelections");
  EXPECT_EQ(incomplete.body.at("sessions"), (Json{a, b}));

  call(service, "POST", "/sessions/" + a + "/select", Json{{"channel", "original"}, {"candidate_index", 0}});
  call(service, "POST", "/sessions/" + b + "/select",
       Json{{"channel", "t2t"}, {"edited_text", "rainy day outdoors in the street"}});
  const auto oov = call(service, "POST", "/runs/manual-export", export_body);
  EXPECT_EQ(oov.status, 409);
  EXPECT_EQ(oov.body.at("error"), "OovViolation");
  EXPECT_EQ(oov.body.at("terms"), Json::parse(R"(["street"])"));
  EXPECT_EQ(oov.body.at("violations").at(0).at("session_id"), b);

  call(service, "POST", "/sessions/" + b + "/select",
       Json{{"channel", "t2t"}, {"edited_text", "rainy day outdoors"}});
  const auto ok = call(service, "POST", "/runs/manual-export", export_body);
  ASSERT_EQ(ok.status, 200) << ok.text;
  const auto run = read_run(ok.text);
  EXPECT_EQ(run.tag, "manual");
  EXPECT_EQ(run.lists.size(), 2u);
  EXPECT_EQ(run.lists.at(751).size(), 10u);

  auto bad_tag = export_body;
  bad_tag["run_tag"] = "has space";
  EXPECT_EQ(call(service, "POST", "/runs/manual-export", bad_tag).status, 400);
  const auto dup = call(service, "POST", "/runs/manual-export",
                        Json{{"session_ids", {a, a}}, {"run_tag", "m"}});
  EXPECT_EQ(dup.status, 400);
  EXPECT_EQ(dup.body.at("error"), "DuplicateTopic");
}

TEST(Service, StoreUnavailable) {
  Service service(make_resources({}, false));
  const auto r = call(service, "POST", "/search", Json{{"text", "a red car"}});
  EXPECT_EQ(r.status, 503);
  EXPECT_EQ(r.body.at("error"), "StoreUnavailable");
  const auto id = new_session(service, 751);
  call(service, "POST", "/sessions/" + id + "/select", Json{{"channel", "original"}, {"candidate_index", 0}});
  EXPECT_EQ(call(service, "POST", "/runs/manual-export",
                 Json{{"session_ids", {id}}, {"run_tag", "m"}})
                .status,
            503);
}

TEST(Service, JournalReplay) {
  testing::TempDir dir;
  const auto journal = dir.file("sessions.jsonl");
  std::string a, b;
  Json before;
  {
    Service service(make_resources(journal));
    a = new_session(service, 751);
    b = new_session(service, 770);
    call(service, "POST", "/sessions/" + b + "/select", Json{{"channel", "t2t"}, {"candidate_index", 0}});
    call(service, "POST", "/sessions/" + b + "/select", Json{{"channel", "t2t"}, {"candidate_index", 99}});
    before = call(service, "GET", "/sessions/" + b).body;
  }
  std::ofstream(journal, std::ios::app) << R"({"op":"sel)";
  Service replayed(make_resources(journal));
  EXPECT_EQ(replayed.session_count(), 2u);
  EXPECT_EQ(call(replayed, "GET", "/sessions/" + b).body, before);
  EXPECT_TRUE(call(replayed, "GET", "/sessions/" + a).body.at("selections").empty());
  const auto c = new_session(replayed, 752);
  EXPECT_NE(c, a);
  EXPECT_NE(c, b);
}

TEST(Service, ConcurrentSessionsStayIsolated) {
  Service service(make_resources());
  std::vector<std::string> ids;
  for (int i = 0; i < 4; ++i) ids.push_back(new_session(service, 751 + i));
  std::vector<std::thread> threads;
  for (int i = 0; i < 4; ++i) {
    threads.emplace_back([&, i] {
      for (int j = 0; j < 20; ++j) {
        call(service, "POST", "/sessions/" + ids[i] + "/select",
             Json{{"channel", "i2t"}, {"edited_text", "text " + std::to_string(i)}});
      }
    });
  }
  for (auto& t : threads) t.join();
  for (int i = 0; i < 4; ++i) {
    const auto s = call(service, "GET", "/sessions/" + ids[i]).body;
    EXPECT_EQ(s.at("selections").at("i2t").at("text"), "text " + std::to_string(i));
    EXPECT_EQ(s.at("topic_id"), 751 + i);
  }
}

TEST(Service, FuseAndEvalMatchLibrary) {
  Service service(make_resources());
  const std::string a = "751 Q0 x 1 0.9 A\n751 Q0 y 2 0.5 A\n751 Q0 z 3 0.1 A\n";
  const std::string b = "751 Q0 z 1 0.8 B\n751 Q0 x 2 0.7 B\n";
  const auto fused = call(service, "POST", "/fuse",
                          Json{{"runs", {a, b}}, {"weights", {1, 3}}, {"tag", "ens"}});
  ASSERT_EQ(fused.status, 200) << fused.text;
  FusionSpec spec;
  spec.weights = {1, 3};
  EXPECT_EQ(fused.text, write_run(fuse_runs({read_run(a), read_run(b)}, spec, "ens")));
  EXPECT_EQ(call(service, "POST", "/fuse", Json{{"runs", {a, "garbage"}}, {"tag", "t"}}).status, 400);

  const std::string qrels = "751 1 x 1\n751 1 y 0\n751 1 z 1\n";
  const auto report = call(service, "POST", "/eval", Json{{"run", a}, {"qrels", qrels}});
  ASSERT_EQ(report.status, 200) << report.text;
  EXPECT_EQ(report.body, encode_report(evaluate_run(read_run(a), parse_qrels(qrels))));
  EXPECT_NEAR(report.body.at("mean").get<double>(), 0.833333, 1e-4);
  EXPECT_EQ(call(service, "POST", "/eval", Json{{"run", a}, {"qrels", qrels}, {"metric", "ndcg"}}).status,
            400);
}

TEST(HttpServerTest, ServesOverHttp) {
  Service service(make_resources());
  HttpServer server(service);
  const int port = server.start("127.0.0.1", 0);
  ASSERT_GT(port, 0);
  httplib::Client client("127.0.0.1", port);
  const auto health = client.Get("/healthz");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);
  const auto oov = client.Get("/concepts/oov?q=bald%20spectacles");
  ASSERT_TRUE(oov);
  EXPECT_EQ(Json::parse(oov->body).at("oov"), Json::parse(R"(["spectacles"])"));
  const auto created = client.Post("/topics/999/variants", "{}", "application/json");
  ASSERT_TRUE(created);
  EXPECT_EQ(created->status, 404);
  const auto bad = client.Post("/search", "{not json", "application/json");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);
  server.stop();
}

}  // namespace
}  // namespace gar
