// Copyright 2026 The GAR Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <string>
#include <string_view>

namespace gar {

// Standard alphabet with '=' padding.
std::string base64_encode(std::string_view bytes);
// Throws BadFormat on characters outside the alphabet or bad padding.
std::string base64_decode(std::string_view text);

}  // namespace gar
