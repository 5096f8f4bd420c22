// Copyright 2026 The nmsparse Authors
// SPDX-License-Identifier: Apache-2.0

// Subcommand bodies. Flags are parsed in cli.cpp into these structs.

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "nmsparse/cli.hpp"

namespace nmsparse::cli {

struct FuzzArgs {
  std::string mode = "both";
  std::size_t iters = 1000;
  std::uint64_t seed = kDefaultSeed;
  std::string container;  // when set, validate this file instead of fuzzing
};

struct SpeedupArgs {
  double d = 64;
  double tile = 128;
  double features = 0;  // 0: round(d ln d)
  std::vector<double> n_list{128, 256, 512, 671, 672, 1002, 1003, 1024, 2048, 4096, 16384};
  std::vector<double> s_list{0.02, 0.0451, 0.1, 0.25, 0.5, 0.6319, 0.75};
  std::string out;
};

struct AttnDemoArgs {
  std::size_t n = 256;
  std::size_t d = 64;
  std::string mode = "1:2";
  std::uint64_t seed = kDefaultSeed;
  std::size_t heads = 1;
  std::string dump_heatmaps;
};

struct TrafficArgs {
  std::string kind = "nm";
  double n = 1024;
  double d = 64;
  double tile = 128;
  double s = 0.5;
  std::string out;
};

struct CompressArgs {
  std::size_t rows = 64;
  std::size_t cols = 64;
  std::string mode = "2:4";
  std::string layout = "tile";
  std::uint64_t seed = kDefaultSeed;
  std::string out;
};

int cmd_roundtrip_fuzz(const FuzzArgs& args, std::ostream& out, std::ostream& err);
int cmd_quality_sweep(const QualitySweepOptions& options, const std::string& out_path,
                      std::ostream& out, std::ostream& err);
int cmd_speedup_table(const SpeedupArgs& args, std::ostream& out, std::ostream& err);
int cmd_attn_demo(const AttnDemoArgs& args, std::ostream& out, std::ostream& err);
int cmd_traffic(const TrafficArgs& args, std::ostream& out, std::ostream& err);
int cmd_compress(const CompressArgs& args, std::ostream& out, std::ostream& err);

}  // namespace nmsparse::cli
