// Copyright 2026 The nmsparse Authors
// SPDX-License-Identifier: Apache-2.0

// Memory-traffic model of one attention head on a tiled GEMM machine.
// Latency is taken to be proportional to the number of elements moved:
//
//              QK^T                     Softmax    AV
//   Full       n^2 (2d/T + 1)           2 n^2      nd (2n/T + 1)
//   Top-k      n^2 (2d/T + 1)           2 n^2 s    nd (sn + sn/T + 1)
//   Fixed      s n^2 (2d/T + 1)         2 n^2 s    nd ((1+s) n/T + 1)
//   N:M        n^2 (2d/T + 1/2 + 1/16)  n^2        nd (n/T + n/2T + n/16T + 1)
//
// Speedups are Full totals over the pattern's totals; "asymptotic" forms are
// the n >> d limits.

#pragma once

#include <cstdint>

namespace nmsparse::theory {

/// n: sequence length, d: head dim, tile: GEMM tile size T, density: s,
/// features: Performer random features m. Each operation validates only the
/// fields it reads (all must be > 0; density <= 1).
struct CostModelParams {
  double n = 1024;
  double d = 64;
  double tile = 128;
  double density = 1.0;
  double features = 266;
};

enum class AttentionKind { Full, TopK, Fixed, NmSparse };

struct MemoryAccess {
  double qk = 0.0;
  double softmax = 0.0;
  double av = 0.0;

  double total() const { return qk + softmax + av; }
};

/// Table of element transfers; uses n, d, tile and (TopK/Fixed) density.
MemoryAccess memory_access_counts(AttentionKind kind, const CostModelParams& params);

/// Upper bound on top-k speedup: (4d + 3T) / (2d + T + (d + 2T + dT) s).
double speedup_topk_bound(const CostModelParams& params);
/// Finite-n ratio Full / Top-k of the traffic table.
double speedup_topk_finite(const CostModelParams& params);

struct SpeedupForms {
  double finite = 0.0;
  double asymptotic = 0.0;
};

/// Fixed sparse pattern: finite-n ratio and (4d + 3T) / ((1 + 3s) d + 3sT).
SpeedupForms speedup_fixed(const CostModelParams& params);

/// Dynamic 1:2 / 2:4: finite-n ratio and (64d + 48T) / (57d + 25T).
SpeedupForms speedup_nm(const CostModelParams& params);

/// The asymptotic N:M speedup as an unreduced integer fraction.
struct Ratio {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};
Ratio speedup_nm_ratio(std::int64_t d, std::int64_t tile);

/// Density below which the top-k bound exceeds 1: (2d + 2T) / (d + 2T + dT).
double topk_breakeven_density(double d, double tile);
/// Density at which the top-k bound equals the asymptotic N:M speedup.
double topk_equal_efficiency_density(double d, double tile);
/// Density at which the asymptotic fixed-pattern speedup equals the
/// asymptotic N:M speedup.
double fixed_equal_efficiency_density(double d, double tile);

}  // namespace nmsparse::theory
