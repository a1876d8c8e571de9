// Copyright 2026 The GAR Authors
// Licensed under the Apache License, Version 2.0

#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "gar/embedding_index.h"
#include "gar/evaluation.h"
#include "gar/fusion.h"
#include "gar/generation.h"
#include "gar/trec_io.h"

namespace gar {
namespace {

std::vector<float> random_vector(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<float> dist;
  std::vector<float> v(dim);
  for (auto& x : v) x = dist(rng);
  return v;
}

EmbeddingStore random_store(std::size_t n, std::size_t dim) {
  std::mt19937_64 rng(1);
  std::vector<ShotRecord> records;
  records.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    records.push_back({"shot" + std::to_string(i), random_vector(rng, dim)});
  }
  return EmbeddingStore::build(std::move(records), dim);
}

ScoredList random_list(std::mt19937_64& rng, std::size_t len, std::size_t pool) {
  std::vector<std::size_t> ids(pool);
  for (std::size_t i = 0; i < pool; ++i) ids[i] = i;
  std::shuffle(ids.begin(), ids.end(), rng);
  std::uniform_real_distribution<double> score;
  ScoredList out{1, {}, "b"};
  for (std::size_t i = 0; i < len; ++i) out.entries.push_back({"d" + std::to_string(ids[i]), score(rng)});
  sort_entries(out.entries);
  return out;
}

void BM_KnnSearch(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto store = random_store(n, 256);
  std::mt19937_64 rng(2);
  const auto query = normalize(random_vector(rng, 256));
  for (auto _ : state) {
    benchmark::DoNotOptimize(knn_search(store, query, 1000));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_KnnSearch)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_Fuse(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::vector<ScoredList> lists;
  for (int i = 0; i < state.range(0); ++i) lists.push_back(random_list(rng, 1000, 5000));
  const auto spec = equal_weights(lists.size());
  for (auto _ : state) {
    benchmark::DoNotOptimize(fuse(lists, spec));
  }
}
BENCHMARK(BM_Fuse)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMicrosecond);

void BM_XinfAP(benchmark::State& state) {
  std::mt19937_64 rng(4);
  std::string text;
  for (int i = 0; i < 5000; ++i) {
    const int stratum = i < 1000 ? 1 : 2;
    const bool sampled = rng() % (stratum == 1 ? 1 : 5) == 0;
    const int judgment = sampled ? static_cast<int>(rng() % 4 == 0) : kUnsampled;
    text += "1 " + std::to_string(stratum) + " d" + std::to_string(i) + " " +
            std::to_string(judgment) + "\n";
  }
  const auto qrels = parse_qrels(text);
  const TopicJudgmentView view(qrels.topics.at(1));
  const auto list = random_list(rng, 1000, 6000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(xinf_ap(list, view));
  }
}
BENCHMARK(BM_XinfAP)->Unit(benchmark::kMicrosecond);

void BM_TokenHashEmbed(benchmark::State& state) {
  const std::string text = "Two women together wearing hats, excluding caps, outdoors";
  for (auto _ : state) {
    benchmark::DoNotOptimize(token_hash_embed(text, 256));
  }
}
BENCHMARK(BM_TokenHashEmbed);

}  // namespace
}  // namespace gar

BENCHMARK_MAIN();
