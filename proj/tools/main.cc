// Copyright 2026 The GAR Authors
// Licensed under the Apache License, Version 2.0

#include <iostream>

#include "gar/cli.h"

int main(int argc, char** argv) {
  return gar::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
