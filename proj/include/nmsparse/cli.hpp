// Copyright 2026 The nmsparse Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. `run` is what tools/nmsparse calls; the helpers
// below are the testable pieces behind the subcommands.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nmsparse/dense_matrix.hpp"
#include "nmsparse/nm_codec.hpp"
#include "nmsparse/random.hpp"

namespace nmsparse::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitUsage = 2;

/// Seed used when neither --seed, the config file nor NM_SPARSE_SEED set one.
inline constexpr std::uint64_t kDefaultSeed = 1;

/// Parses `args` (without the program name) and runs one subcommand.
/// Returns 0 on success, 1 on a failed check, 2 on a usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Reads "key=value" lines ('#' starts a comment) into ordered pairs.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

// -- roundtrip fuzzing --------------------------------------------------------

/// Returns a failure description, or nullopt when the case passes.
using CaseCheck = std::function<std::optional<std::string>(const DenseMatrix&, SparsityMode)>;

/// compress/decompress against the prune oracle, tile encode/decode identity,
/// and the NMCS container round trip, all compared bitwise.
std::optional<std::string> check_codec_case(const DenseMatrix& m, SparsityMode mode);

/// Random tile-aligned matrix: 32 or 64 rows, 1-3 metadata tiles wide, values
/// drawn either from N(0,1) or from a small integer grid to force ties.
DenseMatrix random_codec_matrix(Rng& rng, SparsityMode mode);

/// Shrinks a failing matrix to the smallest aligned 32-row band / column tile
/// that still fails `check`.
DenseMatrix minimize_counterexample(const DenseMatrix& m, SparsityMode mode,
                                    const CaseCheck& check);

struct FuzzReport {
  std::size_t cases = 0;
  std::size_t passed = 0;
  std::string failure;                       // first failure message
  std::optional<DenseMatrix> counterexample;  // minimized first failure
};

FuzzReport fuzz_codec(SparsityMode mode, std::size_t iters, std::uint64_t seed,
                      const CaseCheck& check = check_codec_case);

// -- quality sweep ------------------------------------------------------------

struct QualitySweepOptions {
  double p = 6.5;
  double sigma = 1.0;
  std::vector<double> densities{0.02, 0.05, 0.1, 0.25, 0.5};
  std::size_t n = 256;
  std::size_t samples = 8;
  std::uint64_t seed = kDefaultSeed;
};

struct QualityRow {
  std::string pattern;  // topk, fixed, 1:2, 2:4
  double density = 0.0;
  double theory = 0.0;
  double empirical_mean = 0.0;
  double empirical_std = 0.0;
};

/// Theory vs empirical Q^p on softmaxed i.i.d. N(0, sigma^2) score matrices.
std::vector<QualityRow> quality_sweep(const QualitySweepOptions& options);

}  // namespace nmsparse::cli
