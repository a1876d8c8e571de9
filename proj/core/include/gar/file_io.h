// Copyright 2026 The GAR Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <string>
#include <string_view>

namespace gar {

// Whole-file read. Throws Error(kIo).
std::string read_file(const std::string& path);

// Writes to "<path>.tmp.<pid>" and renames over `path`, so readers never see
// a partial file. Throws Error(kIo).
void write_file_atomic(const std::string& path, std::string_view bytes);

}  // namespace gar
