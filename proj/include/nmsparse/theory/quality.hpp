// Copyright 2026 The nmsparse Authors
// SPDX-License-Identifier: Apache-2.0

// L^p quality of an attention mask: the expected per-row share of p-th power
// attention mass that a binary mask keeps,
//
//   Q^p = (1/n) sum_j  sum_i (m . A)_{j,i}^p / sum_i A_{j,i}^p.
//
// Closed forms assume the scaled scores QK^T/sqrt(d) are i.i.d. N(mu, sigma^2)
// in the long-sequence limit; only the product p*sigma matters.

#pragma once

#include <cstddef>
#include <cstdint>

#include "nmsparse/dense_matrix.hpp"
#include "nmsparse/nm_codec.hpp"

namespace nmsparse::theory {

/// Task exponent that lines up top-k and fixed-pattern accuracy on BERT-large
/// SQuAD; the default for sweeps. Not fitted here.
inline constexpr double kTaskExponentAnchor = 6.5;

struct QualityParams {
  double p = kTaskExponentAnchor;  // >= 0
  double sigma = 1.0;              // > 0
  double mu = 0.0;
  double density = 0.5;  // in (0, 1]

  double p_sigma() const { return p * sigma; }
  void validate() const;
};

/// (1 + erf(p_sigma/sqrt(2) - erfinv(1 - 2s))) / 2 for 0 < s < 1, p_sigma >= 0.
double quality_topk(double density, double p_sigma);

/// A value-independent mask keeps a fraction s of the mass: returns s, 0 < s <= 1.
double quality_fixed(double density);

struct QualityValue {
  double value = 0.0;
  bool is_lower_bound = false;

  friend bool operator==(const QualityValue&, const QualityValue&) = default;
};

/// 1:2 is exact, (1 + erf(p_sigma/2)) / 2; 2:4 returns the same value flagged
/// as a lower bound.
QualityValue quality_nm(double p_sigma, SparsityMode mode);

/// Q^p of `mask` over row-stochastic (or any nonnegative) `weights`.
/// Rows are rescaled by their maximum before exponentiation, so large p does
/// not underflow. Throws DomainError for p <= 0, negative weights or an
/// all-zero row; ShapeError on shape mismatch.
double empirical_quality(const DenseMatrix& weights, const PruneMask& mask, double p);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

/// Monte-Carlo estimate of Q^p for the N:M pattern:
///   1:2  E[max(X^p, Y^p)] / (2 E[X^p])
///   2:4  E[top-2 sum of four X_i^p] / (4 E[X^p])
/// with X = exp(sigma Z) and E[X^p] = exp(p^2 sigma^2 / 2) in closed form.
/// Requires samples >= 1e5, p >= 0, sigma > 0.
McEstimate mc_quality_nm(double p, double sigma, SparsityMode mode, std::size_t samples,
                         std::uint64_t seed);

/// Keeps the round(s * cols) largest entries of every row (ties: lower index).
PruneMask topk_mask(const DenseMatrix& weights, double density);

/// Keeps the first round(s * cols) columns of every row, independent of values.
PruneMask fixed_mask(std::size_t rows, std::size_t cols, double density);

}  // namespace nmsparse::theory
