// Copyright 2026 The GAR Authors
// Licensed under the Apache License, Version 2.0

#include "gar/cli.h"

#include <pthread.h>
#include <signal.h>

#include <cstdio>
#include <filesystem>
#include <ostream>

#include <CLI11.hpp>

#include "gar/concept_bank.h"
#include "gar/embedding_index.h"
#include "gar/error.h"
#include "gar/evaluation.h"
#include "gar/file_io.h"
#include "gar/fusion.h"
#include "gar/generation.h"
#include "gar/http_generators.h"
#include "gar/json_codec.h"
#include "gar/mock_generators.h"
#include "gar/pipeline.h"
#include "gar/service.h"
#include "gar/service_config.h"
#include "gar/trec_io.h"

namespace gar {
namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Options shared by `search` and `generate`.
struct GeneratorFlags {
  std::string topics_path;
  std::string concepts_path;
  std::string substitutions_path;
  std::string generator_url;
  bool mock = false;
  std::uint64_t seed = 0;
  int n_t2t = 1;
  int n_images = 4;
  std::size_t dim = 256;
  std::size_t in_flight_cap = 4;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--topics", topics_path, "Topic TSV (default: bundled TV24 topics)");
    cmd->add_option("--concepts", concepts_path, "Concept bank, one concept per line");
    cmd->add_option("--substitutions", substitutions_path, "Mock T2T substitution table (JSON)");
    cmd->add_flag("--mock", mock, "Use the deterministic mock generators and embedder");
    cmd->add_option("--generator-url", generator_url, "Base URL of an HTTP generator server");
    cmd->add_option("--seed", seed, "Generation seed");
    cmd->add_option("--n-t2t", n_t2t, "T2T rewrites per topic")->check(CLI::PositiveNumber);
    cmd->add_option("--n-images", n_images, "T2I images per topic")->check(CLI::PositiveNumber);
    cmd->add_option("--in-flight", in_flight_cap, "Concurrent requests per generator endpoint")
        ->check(CLI::PositiveNumber);
  }

  void check() const {
    if (mock == !generator_url.empty()) {
      throw UsageError("give exactly one of --mock or --generator-url");
    }
  }

  std::vector<Topic> topics() const {
    return topics_path.empty() ? mock::tv24_topics() : parse_topics(read_file(topics_path));
  }

  std::shared_ptr<const ConceptBank> bank() const {
    if (concepts_path.empty()) return nullptr;
    return std::make_shared<ConceptBank>(ConceptBank::parse(read_file(concepts_path), concepts_path));
  }

  GeneratorClients clients(std::size_t embed_dim) const {
    if (mock) {
      mock::MockOptions opts;
      opts.dim = embed_dim;
      if (!substitutions_path.empty()) {
        opts.substitutions = mock::parse_substitution_table(read_file(substitutions_path));
      }
      return mock::make_mock_clients(opts);
    }
    const std::string& u = generator_url;
    return make_http_clients({u, u, u, u}, in_flight_cap);
  }

  GeneratorConfig generator() const {
    GeneratorConfig g;
    g.seed = seed;
    g.n_t2t = n_t2t;
    g.n_images = n_images;
    g.in_flight_cap = in_flight_cap;
    return g;
  }
};

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    out.push_back(s.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<double> parse_weights(const std::string& s) {
  std::vector<double> out;
  for (const auto& part : split_commas(s)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw UsageError("bad weight '" + part + "' in --weights");
    }
  }
  return out;
}

Normalization parse_norm_flag(const std::string& s) {
  try {
    return parse_normalization(s);
  } catch (const Error& e) {
    throw UsageError(e.detail());
  }
}

std::set<Channel> parse_channels_flag(const std::string& s) {
  try {
    return parse_channel_list(s);
  } catch (const Error& e) {
    throw UsageError(e.detail());
  }
}

Metric parse_metric_flag(const std::string& s) {
  const auto m = to_lower(s);
  if (m == "xinfap") return Metric::kXinfAP;
  if (m == "ap") return Metric::kAP;
  throw UsageError("--metric must be xinfap or ap, got '" + s + "'");
}

void require_tag(const std::string& tag) {
  if (!is_valid_run_tag(tag)) throw UsageError("--tag must be non-empty without whitespace");
}

// `index build`
struct IndexFlags {
  std::string input;
  std::string texts;
  std::string out;
  std::size_t dim = 256;

  int run() const {
    if (input.empty() == texts.empty()) throw UsageError("give exactly one of --input or --texts");
    std::vector<ShotRecord> records;
    std::size_t store_dim = dim;
    if (!input.empty()) {
      records = parse_vector_text(read_file(input));
      if (records.empty()) throw Error(ErrorCode::kBadFormat, input + ": no vectors");
      store_dim = records.front().vector.size();
    } else {
      internal_texts(records);
    }
    const auto store = EmbeddingStore::build(std::move(records), store_dim);
    write_file_atomic(out, store.serialize());
    return kExitOk;
  }

  // "shot_id<TAB>text" lines embedded with the mock token-hash embedder.
  void internal_texts(std::vector<ShotRecord>& records) const {
    const std::string text = read_file(texts);
    std::size_t pos = 0;
    std::size_t line = 0;
    while (pos < text.size()) {
      auto nl = text.find('\n', pos);
      if (nl == std::string::npos) nl = text.size();
      std::string_view row(text.data() + pos, nl - pos);
      pos = nl + 1;
      ++line;
      if (!row.empty() && row.back() == '\r') row.remove_suffix(1);
      if (trim(row).empty() || row.front() == '#') continue;
      const auto tab = row.find('\t');
      if (tab == std::string_view::npos) {
        throw Error(ErrorCode::kMalformedLine, texts + ": expected shot_id<TAB>text", line);
      }
      records.push_back({std::string(row.substr(0, tab)), token_hash_embed(row.substr(tab + 1), dim)});
    }
  }
};

// `search`
struct SearchFlags {
  GeneratorFlags gen;
  std::string store_path;
  std::string channels = "original,t2t,t2i,i2t";
  std::string norm = "minmax";
  std::string tag;
  std::string out;
  std::size_t k = kDefaultCutoff;

  int run(std::ostream& err) const {
    gen.check();
    require_tag(tag);
    PipelineConfig cfg;
    cfg.channels = parse_channels_flag(channels);
    cfg.fusion.normalization = parse_norm_flag(norm);
    cfg.k = k;
    cfg.run_tag = tag;
    cfg.generator = gen.generator();

    auto store = std::make_shared<EmbeddingStore>(EmbeddingStore::parse(read_file(store_path)));
    cfg.store = store;
    cfg.bank = gen.bank();
    const auto topics = gen.topics();
    const auto result = run_gar(topics, cfg, gen.clients(store->dim()));
    for (const auto& w : result.warnings) err << "gar: warning: " << w << "\n";

    std::vector<std::pair<std::string, std::string>> files;
    files.emplace_back(out, write_run(result.fused));
    for (const auto& [channel, run] : result.channel_runs) {
      files.emplace_back(channel_run_path(out, std::string(channel_name(channel))), write_run(run));
    }
    for (const auto& [path, bytes] : files) write_file_atomic(path, bytes);
    return kExitOk;
  }
};

// `generate`
struct GenerateFlags {
  GeneratorFlags gen;
  std::string out;
  std::vector<int> topic_ids;

  int run(std::ostream& out_stream) const {
    gen.check();
    const auto bank = gen.bank();
    auto topics = gen.topics();
    if (!topic_ids.empty()) {
      std::erase_if(topics, [&](const Topic& t) {
        return std::find(topic_ids.begin(), topic_ids.end(), t.topic_id) == topic_ids.end();
      });
      if (topics.empty()) throw Error(ErrorCode::kNotFound, "none of the --topic ids exist");
    }
    const auto clients = gen.clients(gen.dim);
    Json doc = Json::array();
    for (const auto& topic : topics) {
      doc.push_back(encode_variants(generate_variants(topic, gen.generator(), clients, bank.get()),
                                    bank.get()));
    }
    const std::string text = doc.dump(2) + "\n";
    if (out.empty()) {
      out_stream << text;
    } else {
      write_file_atomic(out, text);
    }
    return kExitOk;
  }
};

// `fuse`
struct FuseFlags {
  std::vector<std::string> runs;
  std::string weights;
  std::string norm = "minmax";
  std::size_t cutoff = kDefaultCutoff;
  double missing_score = 0.0;
  std::string tag = "fused";
  std::string out;

  int run() const {
    require_tag(tag);
    FusionSpec spec;
    spec.weights = weights.empty() ? std::vector<double>(runs.size(), 1.0) : parse_weights(weights);
    if (spec.weights.size() != runs.size()) {
      throw UsageError("--weights has " + std::to_string(spec.weights.size()) +
                       " values but --runs has " + std::to_string(runs.size()) + " files");
    }
    spec.normalization = parse_norm_flag(norm);
    spec.cutoff = cutoff;
    spec.missing_score = missing_score;
    try {
      validate(spec, runs.size());
    } catch (const Error& e) {
      throw UsageError(e.detail());
    }
    std::vector<Run> inputs;
    for (const auto& path : runs) inputs.push_back(read_run(read_file(path)));
    write_file_atomic(out, write_run(fuse_runs(inputs, spec, tag)));
    return kExitOk;
  }
};

// `eval`
struct EvalFlags {
  std::string run_path;
  std::string qrels_path;
  std::string metric = "xinfap";
  std::string report;
  std::string json_report;
  double epsilon = 1e-5;

  int run(std::ostream& out) const {
    const auto m = parse_metric_flag(metric);
    EvalConfig cfg;
    cfg.epsilon = epsilon;
    try {
      validate(cfg);
    } catch (const Error& e) {
      throw UsageError(e.detail());
    }
    const auto result = evaluate_run(read_run(read_file(run_path)), parse_qrels(read_file(qrels_path)), cfg, m);
    if (!report.empty()) write_file_atomic(report, render_report_tsv(result));
    if (!json_report.empty()) write_file_atomic(json_report, render_report_json(result) + "\n");
    char line[64];
    std::snprintf(line, sizeof line, "mean\t%s\t%.6f\n", result.metric.c_str(), result.mean);
    out << line;
    return kExitOk;
  }
};

// `compare`
struct CompareFlags {
  std::vector<std::string> runs;
  std::string qrels_path;
  std::string metric = "xinfap";
  std::size_t depth = 1000;
  std::string out;

  int run(std::ostream& out_stream) const {
    const auto m = parse_metric_flag(metric);
    const auto qrels = parse_qrels(read_file(qrels_path));
    std::vector<Run> loaded;
    std::vector<EvalReport> reports;
    for (const auto& path : runs) {
      loaded.push_back(read_run(read_file(path)));
      reports.push_back(evaluate_run(loaded.back(), qrels, {}, m));
    }
    const auto text = render_comparison_tsv(compare_runs(reports, loaded, depth));
    if (out.empty()) {
      out_stream << text;
    } else {
      write_file_atomic(out, text);
    }
    return kExitOk;
  }
};

// `oov`
struct OovFlags {
  std::string concepts_path;
  std::string query;

  int run(std::ostream& out) const {
    const auto bank = ConceptBank::parse(read_file(concepts_path), concepts_path);
    for (const auto& term : detect_oov(query, bank)) out << term << "\n";
    return kExitOk;
  }
};

// `serve`
struct ServeFlags {
  std::string config_path;
  std::string listen;

  int run(std::ostream& out) const {
    ServiceConfig cfg = load_service_config(config_path);
    if (!listen.empty()) {
      ServiceConfig tmp = parse_service_config("listen = \"" + listen + "\"\n");
      cfg.host = tmp.host;
      cfg.port = tmp.port;
    }
    Service service(load_resources(cfg));

    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    HttpServer server(service);
    const int port = server.start(cfg.host, cfg.port);
    out << "listening on " << cfg.host << ":" << port << std::endl;
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
    return kExitOk;
  }
};

std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

}  // namespace

std::string channel_run_path(const std::string& out_path, const std::string& channel) {
  const std::filesystem::path p(out_path);
  if (!p.has_extension()) return out_path + "." + channel;
  auto stem = p;
  stem.replace_extension();
  return stem.string() + "." + channel + p.extension().string();
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generation-augmented retrieval for ad-hoc video search", "gar"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  IndexFlags index;
  auto* index_cmd = app.add_subcommand("index", "Embedding store tools")->require_subcommand(1);
  auto* build_cmd = index_cmd->add_subcommand("build", "Build a binary embedding store");
  build_cmd->add_option("--input", index.input, "Vector text file: shot_id v1 v2 ...");
  build_cmd->add_option("--texts", index.texts, "Shot text file: shot_id<TAB>text (mock embedder)");
  build_cmd->add_option("--dim", index.dim, "Mock embedder dimension for --texts")
      ->check(CLI::Range(8, 1 << 16));
  build_cmd->add_option("--out", index.out, "Output store")->required();

  SearchFlags search;
  auto* search_cmd = app.add_subcommand("search", "Run generation-augmented search over topics");
  search.gen.add_to(search_cmd);
  search_cmd->add_option("--store", search.store_path, "Embedding store")->required();
  search_cmd->add_option("--channels", search.channels, "Comma-separated: original,t2t,t2i,i2t");
  search_cmd->add_option("--norm", search.norm, "Score normalization: minmax, rank or none");
  search_cmd->add_option("--k", search.k, "Result depth per topic");
  search_cmd->add_option("--tag", search.tag, "Run tag")->required();
  search_cmd->add_option("--out", search.out, "Fused run file; per-channel runs go next to it")
      ->required();

  GenerateFlags generate;
  auto* generate_cmd = app.add_subcommand("generate", "Generate query variants as JSON");
  generate.gen.add_to(generate_cmd);
  generate_cmd->add_option("--topic", generate.topic_ids, "Restrict to these topic ids");
  generate_cmd->add_option("--dim", generate.gen.dim, "Mock embedder dimension");
  generate_cmd->add_option("--out", generate.out, "Output file (default: stdout)");

  FuseFlags fuse;
  auto* fuse_cmd = app.add_subcommand("fuse", "Fuse run files");
  fuse_cmd->add_option("--runs", fuse.runs, "Input run files")->required();
  fuse_cmd->add_option("--weights", fuse.weights, "Comma-separated weights, one per run");
  fuse_cmd->add_option("--norm", fuse.norm, "Score normalization: minmax, rank or none");
  fuse_cmd->add_option("--cutoff", fuse.cutoff, "Result depth per topic");
  fuse_cmd->add_option("--missing-score", fuse.missing_score, "Score of a shot absent from a list");
  fuse_cmd->add_option("--tag", fuse.tag, "Output run tag");
  fuse_cmd->add_option("--out", fuse.out, "Output run file")->required();

  EvalFlags eval;
  auto* eval_cmd = app.add_subcommand("eval", "Score a run against stratified qrels");
  eval_cmd->add_option("--run", eval.run_path, "Run file")->required();
  eval_cmd->add_option("--qrels", eval.qrels_path, "Stratified qrels file")->required();
  eval_cmd->add_option("--metric", eval.metric, "xinfap or ap");
  eval_cmd->add_option("--report", eval.report, "Per-topic TSV report");
  eval_cmd->add_option("--json", eval.json_report, "JSON report");
  eval_cmd->add_option("--epsilon", eval.epsilon, "Smoothing constant");

  CompareFlags compare;
  auto* compare_cmd = app.add_subcommand("compare", "Compare runs side by side");
  compare_cmd->add_option("--runs", compare.runs, "Run files")->required();
  compare_cmd->add_option("--qrels", compare.qrels_path, "Stratified qrels file")->required();
  compare_cmd->add_option("--metric", compare.metric, "xinfap or ap");
  compare_cmd->add_option("--depth", compare.depth, "Rank-overlap depth");
  compare_cmd->add_option("--out", compare.out, "Output TSV (default: stdout)");

  OovFlags oov;
  auto* oov_cmd = app.add_subcommand("oov", "List query terms the concept bank does not cover");
  oov_cmd->add_option("--concepts", oov.concepts_path, "Concept bank")->required();
  oov_cmd->add_option("--query", oov.query, "Query text")->required();

  ServeFlags serve;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  serve_cmd->add_option("--config", serve.config_path, "Service config file");
  serve_cmd->add_option("--listen", serve.listen, "host:port, overrides the config");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "gar: usage: " << one_line(e.what()) << "\n";
    return kExitUsage;
  }

  try {
    if (build_cmd->parsed()) return index.run();
    if (search_cmd->parsed()) return search.run(err);
    if (generate_cmd->parsed()) return generate.run(out);
    if (fuse_cmd->parsed()) return fuse.run();
    if (eval_cmd->parsed()) return eval.run(out);
    if (compare_cmd->parsed()) return compare.run(out);
    if (oov_cmd->parsed()) return oov.run(out);
    if (serve_cmd->parsed()) return serve.run(out);
  } catch (const UsageError& e) {
    err << "gar: usage: " << one_line(e.what()) << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "gar: error: " << one_line(e.what()) << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "gar: error: " << one_line(e.what()) << "\n";
    return kExitFailure;
  }
  err << "gar: usage: no subcommand\n";
  return kExitUsage;
}

}  // namespace gar
