// Copyright 2026 The nmsparse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "nmsparse/dense_matrix.hpp"

namespace nmsparse {

/// Seeded generator on top of std::mt19937_64.
///
/// Uniform and normal draws are derived here rather than through the
/// <random> distributions, whose output is implementation-defined, so seeded
/// streams match across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal (Box-Muller; pairs are cached).
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }
  /// Uniform integer in [0, bound), bound >= 1.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

/// rows x cols matrix of i.i.d. N(mean, stddev^2) draws.
DenseMatrix gaussian_matrix(Rng& rng, std::size_t rows, std::size_t cols, double mean = 0.0,
                            double stddev = 1.0);

}  // namespace nmsparse
