// Copyright 2026 The GAR Authors
// Licensed under the Apache License, Version 2.0

#include "gar/cli.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "gar/file_io.h"
#include "gar/json_codec.h"
#include "gar/trec_io.h"
#include "temp_dir.h"

namespace gar {
namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

void write(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

TEST(Cli, ChannelRunPath) {
  EXPECT_EQ(channel_run_path("run.txt", "t2t"), "run.t2t.txt");
  EXPECT_EQ(channel_run_path("out/run", "i2t"), "out/run.i2t");
  EXPECT_EQ(channel_run_path("a.b/run.trec", "original"), "a.b/run.original.trec");
}

TEST(Cli, EvalFullJudgmentFixture) {
  testing::TempDir dir;
  write(dir.file("run.txt"), "1 Q0 d1 1 0.9 T\n1 Q0 d2 2 0.5 T\n1 Q0 d3 3 0.1 T\n");
  write(dir.file("qrels.txt"), "1 s d1 1\n1 s d2 0\n1 s d3 1\n");
  const auto r = cli({"eval", "--run", dir.file("run.txt"), "--qrels", dir.file("qrels.txt"),
                      "--report", dir.file("report.tsv"), "--json", dir.file("report.json")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out, "mean\txinfAP\t0.833333\n");
  EXPECT_NE(read_file(dir.file("report.tsv")).find("1\txinfAP\t0.833333"), std::string::npos);
  EXPECT_EQ(Json::parse(read_file(dir.file("report.json"))).at("run_tag"), "T");
  const auto ap = cli({"eval", "--run", dir.file("run.txt"), "--qrels", dir.file("qrels.txt"),
                       "--metric", "ap"});
  EXPECT_EQ(ap.out, "mean\tAP\t0.833333\n");
}

TEST(Cli, UsageErrorsExitTwoWithoutOutput) {
  testing::TempDir dir;
  const auto r = cli({"fuse", "--runs", "a", "--bogus", "--out", dir.file("out.txt")});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_FALSE(std::filesystem::exists(dir.file("out.txt")));
  EXPECT_EQ(cli({}).code, kExitUsage);
  EXPECT_EQ(cli({"search", "--store", "x", "--tag", "t", "--out", dir.file("o")}).code, kExitUsage);
}

TEST(Cli, FuseWeightMismatchNamesCounts) {
  testing::TempDir dir;
  write(dir.file("a.txt"), "1 Q0 x 1 0.9 A\n");
  write(dir.file("b.txt"), "1 Q0 y 1 0.9 B\n");
  const auto r = cli({"fuse", "--runs", dir.file("a.txt"), dir.file("b.txt"), "--weights",
                      "1,2,3", "--out", dir.file("f.txt")});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("3"), std::string::npos);
  EXPECT_NE(r.err.find("2"), std::string::npos);
  EXPECT_FALSE(std::filesystem::exists(dir.file("f.txt")));

  const auto ok = cli({"fuse", "--runs", dir.file("a.txt"), dir.file("b.txt"), "--tag", "ens",
                       "--out", dir.file("f.txt")});
  ASSERT_EQ(ok.code, kExitOk) << ok.err;
  EXPECT_EQ(read_file(dir.file("f.txt")), "1 Q0 x 1 0.500000 ens\n1 Q0 y 2 0.500000 ens\n");
}

TEST(Cli, MissingFileIsFailure) {
  const auto r = cli({"eval", "--run", "/nonexistent/run", "--qrels", "/nonexistent/qrels"});
  EXPECT_EQ(r.code, kExitFailure);
  EXPECT_NE(r.err.find("gar: error:"), std::string::npos);
}

TEST(Cli, OovListsTerms) {
  testing::TempDir dir;
  write(dir.file("bank.txt"), "people\noutdoors\nlineup\n");
  const auto r = cli({"oov", "--concepts", dir.file("bank.txt"), "--query",
                      "Find shots of people standing in line outdoors"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out, "line\nstanding\n");
}

TEST(Cli, IndexSearchCompare) {
  testing::TempDir dir;
  write(dir.file("shots.tsv"),
        "s1\ta bald man with glasses\ns2\ta rainy street\ns3\ttwo women wearing hats\n"
        "s4\ta man reading a newspaper\n");
  write(dir.file("topics.tsv"), "751\tA bald man with glasses\n752\tA rainy day outdoors\n");
  ASSERT_EQ(cli({"index", "build", "--texts", dir.file("shots.tsv"), "--dim", "64", "--out",
                 dir.file("store.gar")})
                .code,
            kExitOk);
  const auto s = cli({"search", "--store", dir.file("store.gar"), "--topics", dir.file("topics.tsv"),
                      "--mock", "--k", "3", "--tag", "gar", "--out", dir.file("run.txt")});
  ASSERT_EQ(s.code, kExitOk) << s.err;
  const auto fused = read_run(read_file(dir.file("run.txt")));
  EXPECT_EQ(fused.lists.size(), 2u);
  EXPECT_EQ(fused.lists.at(751).entries.front().shot_id, "s1");
  for (const char* channel : {"original", "t2t", "t2i", "i2t"}) {
    EXPECT_EQ(read_run(read_file(channel_run_path(dir.file("run.txt"), channel))).tag,
              std::string("gar.") + channel);
  }
  write(dir.file("qrels.txt"), "751 1 s1 1\n751 1 s2 0\n752 1 s2 1\n");
  const auto c = cli({"compare", "--runs", dir.file("run.txt"),
                      channel_run_path(dir.file("run.txt"), "original"), "--qrels",
                      dir.file("qrels.txt")});
  ASSERT_EQ(c.code, kExitOk) << c.err;
  EXPECT_NE(c.out.find("gar.original"), std::string::npos);

  const auto g = cli({"generate", "--mock", "--topics", dir.file("topics.tsv"), "--topic", "751"});
  ASSERT_EQ(g.code, kExitOk) << g.err;
  const auto doc = Json::parse(g.out);
  ASSERT_EQ(doc.size(), 1u);
  EXPECT_EQ(doc.at(0).at("topic").at("topic_id"), 751);
}

}  // namespace
}  // namespace gar
