// Copyright 2026 The GAR Authors
// Licensed under the Apache License, Version 2.0

#include "gar/service_config.h"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <variant>

#include "gar/error.h"
#include "gar/text.h"
#include "line_reader.h"

namespace gar {
namespace {

using Value = std::variant<std::string, long long, bool>;

Value parse_value(std::string_view raw, std::size_t line) {
  if (raw.empty()) throw Error(ErrorCode::kBadFormat, "missing value", line);
  if (raw.front() == '"') {
    std::string out;
    std::size_t i = 1;
    for (; i < raw.size() && raw[i] != '"'; ++i) {
      if (raw[i] == '\\' && i + 1 < raw.size()) {
        const char c = raw[++i];
        switch (c) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case '"': case '\\': out += c; break;
          default: throw Error(ErrorCode::kBadFormat, "unsupported escape", line);
        }
      } else {
        out += raw[i];
      }
    }
    if (i >= raw.size()) throw Error(ErrorCode::kBadFormat, "unterminated string", line);
    const auto rest = trim(raw.substr(i + 1));
    if (!rest.empty() && rest.front() != '#') {
      throw Error(ErrorCode::kBadFormat, "trailing characters after string", line);
    }
    return out;
  }
  auto value = trim(raw.substr(0, raw.find('#')));
  if (value == "true") return true;
  if (value == "false") return false;
  long long n = 0;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, n);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::kBadFormat, "bad value '" + std::string(value) + "'", line);
  }
  return n;
}

template <typename T>
T expect(const Value& v, std::string_view key, std::size_t line) {
  if (const auto* p = std::get_if<T>(&v)) return *p;
  throw Error(ErrorCode::kBadFormat, "wrong type for '" + std::string(key) + "'", line);
}

int as_count(const Value& v, std::string_view key, std::size_t line, long long min) {
  const auto n = expect<long long>(v, key, line);
  if (n < min || n > 1'000'000) {
    throw Error(ErrorCode::kBadFormat, "'" + std::string(key) + "' out of range", line);
  }
  return static_cast<int>(n);
}

void set_listen(ServiceConfig& cfg, std::string_view listen, std::size_t line) {
  const auto colon = listen.rfind(':');
  if (colon == std::string_view::npos || colon == 0) {
    throw Error(ErrorCode::kBadFormat, "listen must be host:port", line);
  }
  int port = 0;
  const auto digits = listen.substr(colon + 1);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), port);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || port < 0 || port > 65535) {
    throw Error(ErrorCode::kBadFormat, "bad listen port '" + std::string(digits) + "'", line);
  }
  cfg.host = std::string(listen.substr(0, colon));
  cfg.port = port;
}

bool set_mode(ServiceConfig& cfg, std::string_view mode) {
  if (mode == "mock") {
    cfg.mock = true;
  } else if (mode == "http") {
    cfg.mock = false;
  } else {
    return false;
  }
  return true;
}

void set_top(ServiceConfig& cfg, std::string_view key, const Value& v, std::size_t line) {
  if (key == "listen") {
    set_listen(cfg, expect<std::string>(v, key, line), line);
  } else if (key == "index") {
    cfg.index_path = expect<std::string>(v, key, line);
  } else if (key == "concepts") {
    cfg.concepts_path = expect<std::string>(v, key, line);
  } else if (key == "topics") {
    cfg.topics_path = expect<std::string>(v, key, line);
  } else if (key == "journal") {
    cfg.journal_path = expect<std::string>(v, key, line);
  } else if (key == "substitutions") {
    cfg.substitutions_path = expect<std::string>(v, key, line);
  } else if (key == "dim") {
    cfg.dim = static_cast<std::size_t>(as_count(v, key, line, 8));
  } else {
    throw Error(ErrorCode::kBadFormat, "unknown key '" + std::string(key) + "'", line);
  }
}

void set_generator(ServiceConfig& cfg, std::string_view key, const Value& v, std::size_t line) {
  auto& g = cfg.generator;
  if (key == "mode") {
    if (!set_mode(cfg, expect<std::string>(v, key, line))) {
      throw Error(ErrorCode::kBadFormat, "mode must be \"mock\" or \"http\"", line);
    }
  } else if (key == "t2t") {
    cfg.endpoints.t2t = expect<std::string>(v, key, line);
  } else if (key == "t2i") {
    cfg.endpoints.t2i = expect<std::string>(v, key, line);
  } else if (key == "i2t") {
    cfg.endpoints.i2t = expect<std::string>(v, key, line);
  } else if (key == "embed") {
    cfg.endpoints.embed = expect<std::string>(v, key, line);
  } else if (key == "seed") {
    const auto n = expect<long long>(v, key, line);
    if (n < 0) throw Error(ErrorCode::kBadFormat, "seed must be >= 0", line);
    g.seed = static_cast<std::uint64_t>(n);
  } else if (key == "n_t2t") {
    g.n_t2t = as_count(v, key, line, 1);
  } else if (key == "n_images") {
    g.n_images = as_count(v, key, line, 1);
  } else if (key == "in_flight_cap") {
    g.in_flight_cap = static_cast<std::size_t>(as_count(v, key, line, 1));
  } else if (key == "enable_t2t") {
    g.enable_t2t = expect<bool>(v, key, line);
  } else if (key == "enable_t2i") {
    g.enable_t2i = expect<bool>(v, key, line);
  } else if (key == "enable_i2t") {
    g.enable_i2t = expect<bool>(v, key, line);
  } else {
    throw Error(ErrorCode::kBadFormat, "unknown key 'generators." + std::string(key) + "'", line);
  }
}

}  // namespace

ServiceConfig parse_service_config(std::string_view text) {
  ServiceConfig cfg;
  std::string section;
  internal::LineReader reader(text);
  std::string_view raw;
  while (reader.next(raw)) {
    const std::size_t line = reader.lineno();
    const auto stripped = trim(raw);
    if (stripped.empty() || stripped.front() == '#') continue;
    if (stripped.front() == '[') {
      const auto close = stripped.find(']');
      if (close == std::string_view::npos) {
        throw Error(ErrorCode::kBadFormat, "unterminated section header", line);
      }
      section = std::string(trim(stripped.substr(1, close - 1)));
      if (section != "generators") {
        throw Error(ErrorCode::kBadFormat, "unknown section [" + section + "]", line);
      }
      continue;
    }
    const auto eq = stripped.find('=');
    if (eq == std::string_view::npos) throw Error(ErrorCode::kBadFormat, "expected key = value", line);
    const auto key = trim(stripped.substr(0, eq));
    const auto value = parse_value(trim(stripped.substr(eq + 1)), line);
    if (section.empty()) {
      set_top(cfg, key, value, line);
    } else {
      set_generator(cfg, key, value, line);
    }
  }
  validate(cfg.generator);
  return cfg;
}

void apply_env_overrides(ServiceConfig& cfg, const EnvLookup& env) {
  auto get = [&](const char* name) -> const char* {
    const char* v = env(name);
    return v && *v ? v : nullptr;
  };
  if (const char* v = get("GAR_LISTEN")) set_listen(cfg, v, 0);
  if (const char* v = get("GAR_INDEX")) cfg.index_path = v;
  if (const char* v = get("GAR_CONCEPTS")) cfg.concepts_path = v;
  if (const char* v = get("GAR_TOPICS")) cfg.topics_path = v;
  if (const char* v = get("GAR_JOURNAL")) cfg.journal_path = v;
  if (const char* v = get("GAR_SUBSTITUTIONS")) cfg.substitutions_path = v;
  if (const char* v = get("GAR_GENERATORS")) {
    if (!set_mode(cfg, v)) throw Error(ErrorCode::kBadFormat, "GAR_GENERATORS must be mock or http");
  }
  if (const char* v = get("GAR_GENERATOR_URL")) {
    cfg.endpoints = {v, v, v, v};
  }
  if (const char* v = get("GAR_SEED")) {
    const std::string_view s(v);
    std::uint64_t seed = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), seed);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw Error(ErrorCode::kBadFormat, "GAR_SEED must be a non-negative integer");
    }
    cfg.generator.seed = seed;
  }
}

void apply_env_overrides(ServiceConfig& cfg) {
  apply_env_overrides(cfg, [](const char* name) { return std::getenv(name); });
}

ServiceConfig load_service_config(const std::string& path) {
  ServiceConfig cfg;
  if (!path.empty()) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::kIo, "cannot read config " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    cfg = parse_service_config(buf.str());
  }
  apply_env_overrides(cfg);
  return cfg;
}

}  // namespace gar
