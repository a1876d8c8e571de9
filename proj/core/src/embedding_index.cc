// Copyright 2026 The GAR Authors
// Licensed under the Apache License, Version 2.0

#include "gar/embedding_index.h"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_set>

#include "gar/error.h"
#include "gar/hash.h"

namespace gar {
namespace {

constexpr double kZeroNormThreshold = 1e-12;
constexpr double kUnitTolerance = 1e-6;

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>(v >> 8));
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  std::uint64_t read_le(std::size_t width) {
    need(width);
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < width; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i]))
           << (8 * i);
    }
    pos_ += width;
    return v;
  }

  std::string_view read_bytes(std::size_t n) {
    need(n);
    auto out = bytes_.substr(pos_, n);
    pos_ += n;
    return out;
  }

  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) {
      throw Error(ErrorCode::kBadFormat, "embedding store truncated at byte " +
                                             std::to_string(pos_));
    }
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

void check_shot_id(const std::string& id) {
  if (id.empty()) throw Error(ErrorCode::kInvalidArgument, "empty shot id");
  if (id.size() > std::numeric_limits<std::uint16_t>::max()) {
    throw Error(ErrorCode::kInvalidArgument, "shot id longer than 65535 bytes");
  }
  for (unsigned char c : id) {
    if (std::isspace(c)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "shot id contains whitespace: '" + id + "'");
    }
  }
}

}  // namespace

EmbeddingVector normalize(std::span<const float> v) {
  double sum_sq = 0.0;
  for (float x : v) {
    if (!std::isfinite(x)) throw Error(ErrorCode::kNonFinite, "vector has NaN/Inf entry");
    sum_sq += static_cast<double>(x) * static_cast<double>(x);
  }
  const double norm = std::sqrt(sum_sq);
  if (norm < kZeroNormThreshold) throw Error(ErrorCode::kZeroVector, "vector norm is zero");
  EmbeddingVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = static_cast<float>(static_cast<double>(v[i]) / norm);
  }
  return out;
}

bool is_unit(std::span<const float> v) {
  double sum_sq = 0.0;
  for (float x : v) {
    if (!std::isfinite(x)) return false;
    sum_sq += static_cast<double>(x) * static_cast<double>(x);
  }
  return std::abs(std::sqrt(sum_sq) - 1.0) <= kUnitTolerance;
}

EmbeddingStore EmbeddingStore::build(std::vector<ShotRecord> records,
                                     std::size_t dim) {
  if (dim == 0) throw Error(ErrorCode::kInvalidArgument, "dim must be positive");
  if (records.size() > std::numeric_limits<std::uint32_t>::max() ||
      dim > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::kInvalidArgument, "store too large for u32 header");
  }
  EmbeddingStore store;
  store.dim_ = dim;
  store.ids_.reserve(records.size());
  store.values_.reserve(records.size() * dim);
  std::unordered_set<std::string> seen;
  for (auto& rec : records) {
    check_shot_id(rec.shot_id);
    if (rec.vector.size() != dim) {
      throw Error(ErrorCode::kDimMismatch,
                  "shot '" + rec.shot_id + "': expected " + std::to_string(dim) +
                      ", got " + std::to_string(rec.vector.size()));
    }
    if (!seen.insert(rec.shot_id).second) {
      throw Error(ErrorCode::kDuplicateId, rec.shot_id);
    }
    EmbeddingVector unit;
    try {
      unit = normalize(rec.vector);
    } catch (const Error& e) {
      throw Error(e.code(), "shot '" + rec.shot_id + "'");
    }
    store.values_.insert(store.values_.end(), unit.begin(), unit.end());
    store.ids_.push_back(std::move(rec.shot_id));
  }
  store.checksum_ = fnv1a64(store.serialize_payload());
  return store;
}

std::string EmbeddingStore::serialize_payload() const {
  std::string out;
  std::size_t id_bytes = 0;
  for (const auto& id : ids_) id_bytes += 2 + id.size();
  out.reserve(8 + id_bytes + values_.size() * 4);
  put_u32(out, static_cast<std::uint32_t>(ids_.size()));
  put_u32(out, static_cast<std::uint32_t>(dim_));
  for (const auto& id : ids_) {
    put_u16(out, static_cast<std::uint16_t>(id.size()));
    out += id;
  }
  for (float x : values_) put_u32(out, std::bit_cast<std::uint32_t>(x));
  return out;
}

std::string EmbeddingStore::serialize() const {
  std::string out(kMagic);
  out += serialize_payload();
  put_u64(out, checksum_);
  return out;
}

EmbeddingStore EmbeddingStore::parse(std::string_view bytes) {
  if (bytes.substr(0, kMagic.size()) != kMagic) {
    throw Error(ErrorCode::kBadFormat, "bad embedding store magic");
  }
  const std::string_view payload_and_sum = bytes.substr(kMagic.size());
  Reader in(payload_and_sum);
  const auto count = static_cast<std::size_t>(in.read_le(4));
  const auto dim = static_cast<std::size_t>(in.read_le(4));
  if (dim == 0) throw Error(ErrorCode::kBadFormat, "zero dim in store header");

  EmbeddingStore store;
  store.dim_ = dim;
  std::unordered_set<std::string> seen;
  store.ids_.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto len = static_cast<std::size_t>(in.read_le(2));
    std::string id(in.read_bytes(len));
    if (!seen.insert(id).second) throw Error(ErrorCode::kDuplicateId, id);
    store.ids_.push_back(std::move(id));
  }
  if (in.remaining() < 8 || (in.remaining() - 8) / 4 / dim < count) {
    throw Error(ErrorCode::kBadFormat, "embedding store truncated in vector block");
  }
  store.values_.resize(count * dim);
  for (auto& x : store.values_) {
    x = std::bit_cast<float>(static_cast<std::uint32_t>(in.read_le(4)));
  }
  const std::size_t payload_len = in.pos();
  const std::uint64_t stored = in.read_le(8);
  if (in.remaining() != 0) {
    throw Error(ErrorCode::kBadFormat, "trailing bytes after checksum");
  }
  const std::uint64_t actual = fnv1a64(payload_and_sum.substr(0, payload_len));
  if (stored != actual) throw Error(ErrorCode::kBadFormat, "checksum mismatch");
  for (std::size_t i = 0; i < count; ++i) {
    if (!is_unit(store.vector(i))) {
      throw Error(ErrorCode::kBadFormat, "vector for '" + store.ids_[i] + "' is not unit norm");
    }
  }
  store.checksum_ = stored;
  return store;
}

std::size_t EmbeddingStore::find(std::string_view shot_id) const {
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (ids_[i] == shot_id) return i;
  }
  return ids_.size();
}

std::vector<ShotRecord> parse_vector_text(std::string_view text) {
  std::vector<ShotRecord> records;
  std::size_t lineno = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    std::vector<std::string_view> fields;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
      const std::size_t start = i;
      while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
      if (i > start) fields.push_back(line.substr(start, i - start));
    }
    if (fields.empty() || fields[0].front() == '#') continue;
    if (fields.size() < 2) {
      throw Error(ErrorCode::kMalformedLine, "expected shot id and values", lineno);
    }
    ShotRecord rec{std::string(fields[0]), {}};
    rec.vector.reserve(fields.size() - 1);
    for (std::size_t f = 1; f < fields.size(); ++f) {
      float value = 0.0f;
      const auto* first = fields[f].data();
      const auto* last = first + fields[f].size();
      auto [ptr, ec] = std::from_chars(first, last, value);
      if (ec != std::errc() || ptr != last) {
        throw Error(ErrorCode::kMalformedLine,
                    "bad number '" + std::string(fields[f]) + "'", lineno);
      }
      rec.vector.push_back(value);
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<SearchHit> knn_search(const EmbeddingStore& store,
                                  std::span<const float> query, std::size_t k) {
  if (query.size() != store.dim()) {
    throw Error(ErrorCode::kDimMismatch, "query: expected " + std::to_string(store.dim()) +
                                             ", got " + std::to_string(query.size()));
  }
  const std::size_t n = store.size();
  k = std::min(k, n);
  if (k == 0) return {};

  EmbeddingVector unit_query;
  if (!is_unit(query)) {
    unit_query = normalize(query);
    query = unit_query;
  }

  std::vector<float> scores(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto v = store.vector(i);
    float acc = 0.0f;
    for (std::size_t j = 0; j < v.size(); ++j) acc += query[j] * v[j];
    scores[i] = acc;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto better = [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return store.id(a) < store.id(b);
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k),
                    order.end(), better);

  std::vector<SearchHit> hits;
  hits.reserve(k);
  for (std::size_t r = 0; r < k; ++r) hits.push_back({store.id(order[r]), scores[order[r]]});
  return hits;
}

}  // namespace gar
