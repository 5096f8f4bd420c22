// Copyright 2026 The nmsparse Authors
// SPDX-License-Identifier: Apache-2.0

#include "nmsparse/theory/cost_model.hpp"

#include <cmath>
#include <string>

#include "nmsparse/errors.hpp"

namespace nmsparse::theory {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string("cost model: ") + name + " must be finite and > 0");
  }
}

void require_shape(const CostModelParams& p, bool needs_n) {
  if (needs_n) require_positive(p.n, "n");
  require_positive(p.d, "d");
  require_positive(p.tile, "tile");
}

void require_density(const CostModelParams& p) {
  require_positive(p.density, "density");
  if (p.density > 1.0) throw DomainError("cost model: density must be <= 1");
}

}  // namespace

MemoryAccess memory_access_counts(AttentionKind kind, const CostModelParams& params) {
  require_shape(params, true);
  const double n = params.n;
  const double d = params.d;
  const double t = params.tile;
  const double s = params.density;
  switch (kind) {
    case AttentionKind::Full:
      return {n * n * (2 * d / t + 1), 2 * n * n, n * d * (2 * n / t + 1)};
    case AttentionKind::TopK:
      require_density(params);
      return {n * n * (2 * d / t + 1), 2 * n * n * s, n * d * (s * n + s * n / t + 1)};
    case AttentionKind::Fixed:
      require_density(params);
      return {s * n * n * (2 * d / t + 1), 2 * n * n * s, n * d * ((1 + s) * n / t + 1)};
    case AttentionKind::NmSparse:
      return {n * n * (2 * d / t + 0.5 + 1.0 / 16), n * n,
              n * d * (n / t + n / (2 * t) + n / (16 * t) + 1)};
  }
  throw DomainError("memory_access_counts: unknown attention kind");
}

double speedup_topk_bound(const CostModelParams& params) {
  require_shape(params, false);
  require_density(params);
  const double d = params.d;
  const double t = params.tile;
  return (4 * d + 3 * t) / (2 * d + t + (d + 2 * t + d * t) * params.density);
}

double speedup_topk_finite(const CostModelParams& params) {
  require_density(params);
  return memory_access_counts(AttentionKind::Full, params).total() /
         memory_access_counts(AttentionKind::TopK, params).total();
}

SpeedupForms speedup_fixed(const CostModelParams& params) {
  require_density(params);
  const double d = params.d;
  const double t = params.tile;
  const double s = params.density;
  return {memory_access_counts(AttentionKind::Full, params).total() /
              memory_access_counts(AttentionKind::Fixed, params).total(),
          (4 * d + 3 * t) / ((1 + 3 * s) * d + 3 * s * t)};
}

SpeedupForms speedup_nm(const CostModelParams& params) {
  const double d = params.d;
  const double t = params.tile;
  return {memory_access_counts(AttentionKind::Full, params).total() /
              memory_access_counts(AttentionKind::NmSparse, params).total(),
          (64 * d + 48 * t) / (57 * d + 25 * t)};
}

Ratio speedup_nm_ratio(std::int64_t d, std::int64_t tile) {
  if (d <= 0 || tile <= 0) throw DomainError("speedup_nm_ratio: d and tile must be > 0");
  return {64 * d + 48 * tile, 57 * d + 25 * tile};
}

double topk_breakeven_density(double d, double tile) {
  require_positive(d, "d");
  require_positive(tile, "tile");
  return (2 * d + 2 * tile) / (d + 2 * tile + d * tile);
}

double topk_equal_efficiency_density(double d, double tile) {
  require_positive(d, "d");
  require_positive(tile, "tile");
  const double nm = (64 * d + 48 * tile) / (57 * d + 25 * tile);
  // (4d + 3T) / (2d + T + (d + 2T + dT) s) == nm
  return ((4 * d + 3 * tile) / nm - (2 * d + tile)) / (d + 2 * tile + d * tile);
}

double fixed_equal_efficiency_density(double d, double tile) {
  require_positive(d, "d");
  require_positive(tile, "tile");
  const double nm = (64 * d + 48 * tile) / (57 * d + 25 * tile);
  // (4d + 3T) / ((1 + 3s) d + 3sT) == nm
  return ((4 * d + 3 * tile) / nm - d) / (3 * d + 3 * tile);
}

}  // namespace nmsparse::theory
