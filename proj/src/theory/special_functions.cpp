// Copyright 2026 The nmsparse Authors
// SPDX-License-Identifier: Apache-2.0

#include "nmsparse/theory/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nmsparse/errors.hpp"

namespace nmsparse::theory {

double erf(double x) { return std::erf(x); }

double erfinv(double y) {
  if (!(y > -1.0 && y < 1.0)) {
    throw DomainError("erfinv: argument " + std::to_string(y) + " outside (-1, 1)");
  }
  if (y == 0.0) return 0.0;

  // Giles' single-precision polynomial as the starting point.
  double w = -std::log((1.0 - y) * (1.0 + y));
  double p;
  if (w < 5.0) {
    w -= 2.5;
    p = 2.81022636e-08;
    p = 3.43273939e-07 + p * w;
    p = -3.5233877e-06 + p * w;
    p = -4.39150654e-06 + p * w;
    p = 0.00021858087 + p * w;
    p = -0.00125372503 + p * w;
    p = -0.00417768164 + p * w;
    p = 0.246640727 + p * w;
    p = 1.50140941 + p * w;
  } else {
    w = std::sqrt(w) - 3.0;
    p = -0.000200214257;
    p = 0.000100950558 + p * w;
    p = 0.00134934322 + p * w;
    p = -0.00367342844 + p * w;
    p = 0.00573950773 + p * w;
    p = -0.0076224613 + p * w;
    p = 0.00943887047 + p * w;
    p = 1.00167406 + p * w;
    p = 2.83297682 + p * w;
  }
  double x = p * y;

  // Halley refinement against std::erf; two steps reach double precision.
  const double two_over_sqrt_pi = 2.0 / std::sqrt(std::numbers::pi);
  for (int i = 0; i < 2; ++i) {
    const double err = std::erf(x) - y;
    const double slope = two_over_sqrt_pi * std::exp(-x * x);
    x -= err / (slope + x * err);
  }
  return x;
}

}  // namespace nmsparse::theory
