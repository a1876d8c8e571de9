// Copyright 2026 The GAR Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gar {

using EmbeddingVector = std::vector<float>;

// Returns v / ||v||. Throws NonFinite on NaN/Inf entries and ZeroVector when
// the norm is below 1e-12.
EmbeddingVector normalize(std::span<const float> v);

// True when every entry is finite and | ||v|| - 1 | <= 1e-6.
bool is_unit(std::span<const float> v);

struct ShotRecord {
  std::string shot_id;
  EmbeddingVector vector;
};

struct SearchHit {
  std::string shot_id;
  float score = 0.0f;

  friend bool operator==(const SearchHit&, const SearchHit&) = default;
};

// Immutable, id-addressed matrix of unit-norm shot embeddings.
//
// Binary layout (little-endian):
//   "GAREMB1\n" | u32 count | u32 dim | count x (u16 len, id bytes)
//   | count*dim f32 | u64 FNV-1a over everything after the magic.
class EmbeddingStore {
 public:
  static constexpr std::string_view kMagic{"GAREMB1\n", 8};

  // Normalizes every vector and rejects duplicate ids, malformed ids and
  // dimension mismatches.
  static EmbeddingStore build(std::vector<ShotRecord> records,
                              std::size_t dim);

  // Parses the binary format. Verifies magic, sizes and checksum.
  static EmbeddingStore parse(std::string_view bytes);

  std::string serialize() const;

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  std::uint64_t checksum() const { return checksum_; }

  const std::string& id(std::size_t i) const { return ids_[i]; }
  const std::vector<std::string>& ids() const { return ids_; }
  std::span<const float> vector(std::size_t i) const {
    return {values_.data() + i * dim_, dim_};
  }

  // Index of `shot_id`, or size() when absent.
  std::size_t find(std::string_view shot_id) const;

 private:
  EmbeddingStore() = default;
  std::string serialize_payload() const;

  std::size_t dim_ = 0;
  std::vector<std::string> ids_;
  std::vector<float> values_;
  std::uint64_t checksum_ = 0;
};

// Parses the text ingest format: one `shot_id v1 v2 ...` line per shot.
// Blank lines and `#` comments are skipped; CRLF is accepted.
std::vector<ShotRecord> parse_vector_text(std::string_view text);

// Exact top-k cosine search. Scores are f32 dot products accumulated in
// index order; hits are ordered by score descending, then shot_id ascending.
// The query is normalized when it is not already unit length.
std::vector<SearchHit> knn_search(const EmbeddingStore& store,
                                  std::span<const float> query, std::size_t k);

}  // namespace gar
