// Copyright 2026 The nmsparse Authors
// SPDX-License-Identifier: Apache-2.0

// Comparison against the Performer positive orthogonal random-feature kernel:
// memory-traffic speedup over full attention and the per-edge approximation
// MSE of both methods for SM(q, k) = exp(q.k / sqrt(d)).

#pragma once

#include <cstddef>

#include "nmsparse/theory/cost_model.hpp"

namespace nmsparse::theory {

/// round(d ln d), the usual feature count.
double performer_default_features(double d);

/// Elements moved by the ten-step Performer graph (uses n, d, tile, features).
double performer_memory_access(const CostModelParams& params);

/// Full-attention traffic over Performer traffic.
double performer_speedup(const CostModelParams& params);

/// Smallest integer n with performer_speedup > 1. The ratio grows with n, so
/// this is a bracketed bisection over n in [1, 2^40].
std::size_t performer_breakeven_length(double d, double tile, double features);

/// Smallest integer n with performer_speedup >= finite-n speedup_nm.
std::size_t performer_nm_crossover_length(double d, double tile, double features);

/// MSE of the 1:2 estimator that keeps SM(q,k) only when q.k beats a random
/// rival key k' ~ N(0, I_d):  SM^2 (1 - erf(sqrt(d) ln SM / (|q| sqrt 2))) / 2.
double mse_sm12(double sm, double q_norm, double d);

/// Upper bound on the Performer ort+ MSE with m features:
///   (1/m) SM^2 [exp((|q|^2 + |k|^2)/sqrt d) SM^2 - 1 - (1 - 1/m) 2/(d+2)].
double mse_performer_bound(double sm, double q_norm, double k_norm, double features, double d);

}  // namespace nmsparse::theory
