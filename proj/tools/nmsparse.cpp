// Copyright 2026 The nmsparse Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>
#include <string>
#include <vector>

#include "nmsparse/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return nmsparse::cli::run(args, std::cout, std::cerr);
}
