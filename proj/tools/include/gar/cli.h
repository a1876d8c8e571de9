// Copyright 2026 The GAR Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gar {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Runs one `gar` invocation. `args` excludes the program name. Results go to
// files or `out`; every failure prints one "gar: ..." line to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "run.txt" + "t2t" -> "run.t2t.txt"; "run" + "t2t" -> "run.t2t".
std::string channel_run_path(const std::string& out_path, const std::string& channel);

}  // namespace gar
