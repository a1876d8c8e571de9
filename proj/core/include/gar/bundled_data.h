// Copyright 2026 The GAR Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <string_view>

// Files under core/data/ compiled into the library.
namespace gar::bundled {

std::string_view stopwords_txt();
std::string_view tv24_topics_tsv();
std::string_view tv24_manual_queries_json();

}  // namespace gar::bundled
