// Copyright 2026 The nmsparse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace nmsparse::theory {

/// Error function (forwards to std::erf).
double erf(double x);

/// Inverse error function on (-1, 1). Throws DomainError at or beyond +-1
/// and for NaN. Accurate to a few ulp for |y| <= 1 - 1e-12.
double erfinv(double y);

}  // namespace nmsparse::theory
