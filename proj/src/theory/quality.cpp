// Copyright 2026 The nmsparse Authors
// SPDX-License-Identifier: Apache-2.0

#include "nmsparse/theory/quality.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <numbers>
#include <string>
#include <vector>

#include "nmsparse/errors.hpp"
#include "nmsparse/random.hpp"
#include "nmsparse/theory/special_functions.hpp"

namespace nmsparse::theory {

namespace {

void require_density_open(double s, const char* what) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError(std::string(what) + ": density must be in (0, 1)");
}

void require_density(double s, const char* what) {
  if (!(s > 0.0 && s <= 1.0)) throw DomainError(std::string(what) + ": density must be in (0, 1]");
}

void require_p_sigma(double p_sigma, const char* what) {
  if (!(p_sigma >= 0.0) || !std::isfinite(p_sigma)) {
    throw DomainError(std::string(what) + ": p*sigma must be finite and >= 0");
  }
}

std::size_t kept_columns(std::size_t cols, double density) {
  return static_cast<std::size_t>(std::llround(density * static_cast<double>(cols)));
}

}  // namespace

void QualityParams::validate() const {
  if (!(p >= 0.0) || !(sigma > 0.0) || !std::isfinite(mu)) {
    throw DomainError("QualityParams: need p >= 0, sigma > 0, finite mu");
  }
  require_density(density, "QualityParams");
}

double quality_topk(double density, double p_sigma) {
  require_density_open(density, "quality_topk");
  require_p_sigma(p_sigma, "quality_topk");
  return (1.0 + erf(p_sigma / std::numbers::sqrt2 - erfinv(1.0 - 2.0 * density))) / 2.0;
}

double quality_fixed(double density) {
  require_density(density, "quality_fixed");
  return density;
}

QualityValue quality_nm(double p_sigma, SparsityMode mode) {
  require_p_sigma(p_sigma, "quality_nm");
  return {(1.0 + erf(p_sigma / 2.0)) / 2.0, mode == SparsityMode::TwoOfFour};
}

double empirical_quality(const DenseMatrix& weights, const PruneMask& mask, double p) {
  if (!(p > 0.0)) throw DomainError("empirical_quality: p must be > 0");
  if (weights.rows() != mask.rows() || weights.cols() != mask.cols()) {
    throw ShapeError("empirical_quality: mask shape differs from weights");
  }
  if (weights.rows() == 0) throw ShapeError("empirical_quality: empty matrix");
  double total = 0.0;
  for (std::size_t r = 0; r < weights.rows(); ++r) {
    const auto row = weights.row(r);
    if (std::any_of(row.begin(), row.end(), [](double v) { return v < 0.0; })) {
      throw DomainError("empirical_quality: negative weight in row " + std::to_string(r));
    }
    const double peak = row.empty() ? 0.0 : *std::max_element(row.begin(), row.end());
    if (!(peak > 0.0)) throw DomainError("empirical_quality: zero row " + std::to_string(r));
    double kept = 0.0;
    double all = 0.0;
    for (std::size_t c = 0; c < row.size(); ++c) {
      const double term = std::pow(row[c] / peak, p);
      all += term;
      if (mask.kept(r, c)) kept += term;
    }
    total += kept / all;
  }
  return total / static_cast<double>(weights.rows());
}

McEstimate mc_quality_nm(double p, double sigma, SparsityMode mode, std::size_t samples,
                         std::uint64_t seed) {
  if (samples < 100000) throw DomainError("mc_quality_nm: need at least 1e5 samples");
  if (!(p >= 0.0) || !(sigma > 0.0)) throw DomainError("mc_quality_nm: need p >= 0, sigma > 0");
  const double ps = p * sigma;
  const double norm = std::exp(ps * ps / 2.0);
  const std::size_t width = group_width(mode);
  Rng rng(seed);

  // Welford running mean / variance.
  double mean = 0.0;
  double m2 = 0.0;
  std::array<double, 4> powers{};
  for (std::size_t i = 0; i < samples; ++i) {
    for (std::size_t j = 0; j < width; ++j) powers[j] = std::exp(ps * rng.normal());
    double kept;
    if (mode == SparsityMode::OneOfTwo) {
      kept = std::max(powers[0], powers[1]);
    } else {
      std::partial_sort(powers.begin(), powers.begin() + 2, powers.end(), std::greater<>());
      kept = powers[0] + powers[1];
    }
    const double x = kept / (static_cast<double>(width) * norm);
    const double delta = x - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (x - mean);
  }
  const double n = static_cast<double>(samples);
  return {mean, std::sqrt(m2 / (n - 1.0) / n), samples};
}

PruneMask topk_mask(const DenseMatrix& weights, double density) {
  require_density(density, "topk_mask");
  const std::size_t k = kept_columns(weights.cols(), density);
  PruneMask mask(weights.rows(), weights.cols());
  std::vector<std::size_t> order(weights.cols());
  for (std::size_t r = 0; r < weights.rows(); ++r) {
    const auto row = weights.row(r);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return row[a] > row[b]; });
    for (std::size_t i = 0; i < k; ++i) mask.set(r, order[i], true);
  }
  return mask;
}

PruneMask fixed_mask(std::size_t rows, std::size_t cols, double density) {
  require_density(density, "fixed_mask");
  const std::size_t k = kept_columns(cols, density);
  PruneMask mask(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < k; ++c) mask.set(r, c, true);
  }
  return mask;
}

}  // namespace nmsparse::theory
