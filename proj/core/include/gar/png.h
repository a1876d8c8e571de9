// Copyright 2026 The GAR Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gar {

// 8-bit RGB PNG with filter type 0 on every row. `text` entries become tEXt
// chunks placed before IDAT.
std::string encode_png_rgb(std::uint32_t width, std::uint32_t height,
                           std::span<const std::uint8_t> rgb,
                           const std::vector<std::pair<std::string, std::string>>& text = {});

bool is_png(std::string_view bytes);

// Value of the first tEXt chunk with `keyword`, if any.
std::optional<std::string> png_text(std::string_view png, std::string_view keyword);

struct PngInfo {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::uint8_t bit_depth = 0;
  std::uint8_t color_type = 0;
};

// Walks the chunk list, verifying every CRC. Throws BadFormat on corruption.
PngInfo inspect_png(std::string_view png);

}  // namespace gar
