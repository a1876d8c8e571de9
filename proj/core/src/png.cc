// Copyright 2026 The GAR Authors
// Licensed under the Apache License, Version 2.0

#include "gar/png.h"

#include <zlib.h>

#include "gar/error.h"

namespace gar {
namespace {

constexpr std::string_view kSignature{"\x89PNG\r\n\x1a\n", 8};

void put_be32(std::string& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<char>((v >> shift) & 0xff));
}

std::uint32_t get_be32(std::string_view bytes, std::size_t pos) {
  std::uint32_t v = 0;
  for (std::size_t i = 0; i < 4; ++i) v = (v << 8) | static_cast<unsigned char>(bytes[pos + i]);
  return v;
}

void put_chunk(std::string& out, std::string_view type, std::string_view data) {
  put_be32(out, static_cast<std::uint32_t>(data.size()));
  const std::size_t crc_start = out.size();
  out += type;
  out += data;
  const auto* p = reinterpret_cast<const Bytef*>(out.data() + crc_start);
  const auto crc = crc32(0L, p, static_cast<uInt>(out.size() - crc_start));
  put_be32(out, static_cast<std::uint32_t>(crc));
}

template <typename Visitor>
void walk_chunks(std::string_view png, Visitor&& visit) {
  if (!is_png(png)) throw Error(ErrorCode::kBadFormat, "not a PNG");
  std::size_t pos = kSignature.size();
  while (pos < png.size()) {
    if (png.size() - pos < 12) throw Error(ErrorCode::kBadFormat, "truncated PNG chunk");
    const std::uint32_t len = get_be32(png, pos);
    if (png.size() - pos - 12 < len) throw Error(ErrorCode::kBadFormat, "truncated PNG chunk");
    const auto type = png.substr(pos + 4, 4);
    const auto data = png.substr(pos + 8, len);
    const auto* p = reinterpret_cast<const Bytef*>(png.data() + pos + 4);
    if (crc32(0L, p, len + 4) != get_be32(png, pos + 8 + len)) {
      throw Error(ErrorCode::kBadFormat, "PNG chunk CRC mismatch");
    }
    pos += 12 + len;
    if (!visit(type, data)) return;
    if (type == "IEND") return;
  }
  throw Error(ErrorCode::kBadFormat, "PNG without IEND");
}

}  // namespace

std::string encode_png_rgb(std::uint32_t width, std::uint32_t height,
                           std::span<const std::uint8_t> rgb,
                           const std::vector<std::pair<std::string, std::string>>& text) {
  const std::size_t row = static_cast<std::size_t>(width) * 3;
  if (width == 0 || height == 0 || rgb.size() != row * height) {
    throw Error(ErrorCode::kInvalidArgument, "pixel buffer does not match PNG size");
  }
  std::string out(kSignature);

  std::string ihdr;
  put_be32(ihdr, width);
  put_be32(ihdr, height);
  ihdr += std::string{'\x08', '\x02', '\x00', '\x00', '\x00'};  // 8-bit RGB
  put_chunk(out, "IHDR", ihdr);

  for (const auto& [keyword, value] : text) {
    put_chunk(out, "tEXt", keyword + std::string(1, '\0') + value);
  }

  std::string raw;
  raw.reserve((row + 1) * height);
  for (std::uint32_t y = 0; y < height; ++y) {
    raw.push_back('\0');
    raw.append(reinterpret_cast<const char*>(rgb.data() + y * row), row);
  }
  uLongf compressed_len = compressBound(static_cast<uLong>(raw.size()));
  std::string compressed(compressed_len, '\0');
  if (compress2(reinterpret_cast<Bytef*>(compressed.data()), &compressed_len,
                reinterpret_cast<const Bytef*>(raw.data()), static_cast<uLong>(raw.size()),
                Z_BEST_COMPRESSION) != Z_OK) {
    throw Error(ErrorCode::kIo, "zlib compression failed");
  }
  compressed.resize(compressed_len);
  put_chunk(out, "IDAT", compressed);
  put_chunk(out, "IEND", {});
  return out;
}

bool is_png(std::string_view bytes) { return bytes.substr(0, kSignature.size()) == kSignature; }

std::optional<std::string> png_text(std::string_view png, std::string_view keyword) {
  std::optional<std::string> found;
  walk_chunks(png, [&](std::string_view type, std::string_view data) {
    if (type != "tEXt") return true;
    const auto nul = data.find('\0');
    if (nul != std::string_view::npos && data.substr(0, nul) == keyword) {
      found = std::string(data.substr(nul + 1));
      return false;
    }
    return true;
  });
  return found;
}

PngInfo inspect_png(std::string_view png) {
  PngInfo info;
  bool saw_ihdr = false;
  bool saw_iend = false;
  walk_chunks(png, [&](std::string_view type, std::string_view data) {
    if (type == "IHDR") {
      if (data.size() != 13) throw Error(ErrorCode::kBadFormat, "bad IHDR length");
      info.width = get_be32(data, 0);
      info.height = get_be32(data, 4);
      info.bit_depth = static_cast<std::uint8_t>(data[8]);
      info.color_type = static_cast<std::uint8_t>(data[9]);
      saw_ihdr = true;
    }
    if (type == "IEND") saw_iend = true;
    return true;
  });
  if (!saw_ihdr || !saw_iend) throw Error(ErrorCode::kBadFormat, "PNG missing IHDR or IEND");
  return info;
}

}  // namespace gar
