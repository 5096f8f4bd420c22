// Copyright 2026 The nmsparse Authors
// SPDX-License-Identifier: Apache-2.0

#include "nmsparse/theory/performer.hpp"

#include <cmath>
#include <cstdint>
#include <string>

#include "nmsparse/errors.hpp"
#include "nmsparse/theory/special_functions.hpp"

namespace nmsparse::theory {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string("performer model: ") + name + " must be finite and > 0");
  }
}

// Smallest integer n in [1, 2^40] with pred(n), assuming pred is monotone.
template <typename Pred>
std::size_t first_true(Pred pred) {
  if (pred(1.0)) return 1;
  std::uint64_t lo = 1;  // pred(lo) false
  std::uint64_t hi = 2;
  while (!pred(static_cast<double>(hi))) {
    lo = hi;
    hi *= 2;
    if (hi > (std::uint64_t{1} << 40)) throw DomainError("performer model: no crossover below 2^40");
  }
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    (pred(static_cast<double>(mid)) ? hi : lo) = mid;
  }
  return static_cast<std::size_t>(hi);
}

}  // namespace

double performer_default_features(double d) {
  require_positive(d, "d");
  return std::round(d * std::log(d));
}

double performer_memory_access(const CostModelParams& params) {
  require_positive(params.n, "n");
  require_positive(params.d, "d");
  require_positive(params.tile, "tile");
  require_positive(params.features, "features");
  const double n = params.n;
  const double d = params.d;
  const double t = params.tile;
  const double m = params.features;
  const double feature_maps = n * m * (2 * d / t + 1) + n * (d + 1) + n * (m + 1) + n * (m + 3);
  return 2 * feature_maps + m * (n + 1) + n * (m / t + m + 1) + m * d * (2 * n / t + 1) +
         n * d * (2 * m / t + 1) + n;
}

double performer_speedup(const CostModelParams& params) {
  return memory_access_counts(AttentionKind::Full, params).total() /
         performer_memory_access(params);
}

std::size_t performer_breakeven_length(double d, double tile, double features) {
  return first_true([&](double n) {
    return performer_speedup({.n = n, .d = d, .tile = tile, .features = features}) > 1.0;
  });
}

std::size_t performer_nm_crossover_length(double d, double tile, double features) {
  return first_true([&](double n) {
    const CostModelParams p{.n = n, .d = d, .tile = tile, .features = features};
    return performer_speedup(p) >= speedup_nm(p).finite;
  });
}

double mse_sm12(double sm, double q_norm, double d) {
  require_positive(sm, "sm");
  require_positive(q_norm, "q_norm");
  require_positive(d, "d");
  const double arg = std::sqrt(d) / (q_norm * std::sqrt(2.0)) * std::log(sm);
  return sm * sm * std::erfc(arg) / 2.0;
}

double mse_performer_bound(double sm, double q_norm, double k_norm, double features, double d) {
  require_positive(sm, "sm");
  require_positive(q_norm, "q_norm");
  require_positive(k_norm, "k_norm");
  require_positive(features, "features");
  require_positive(d, "d");
  const double m = features;
  const double growth = std::exp((q_norm * q_norm + k_norm * k_norm) / std::sqrt(d)) * sm * sm;
  return sm * sm / m * (growth - 1.0 - (1.0 - 1.0 / m) * 2.0 / (d + 2.0));
}

}  // namespace nmsparse::theory
