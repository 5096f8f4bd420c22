// Copyright 2026 The nmsparse Authors
// SPDX-License-Identifier: Apache-2.0

#include "nmsparse/dense_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nmsparse/errors.hpp"

namespace nmsparse {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw ShapeError("DenseMatrix: data length " + std::to_string(data_.size()) +
                     " != " + std::to_string(rows_) + " x " + std::to_string(cols_));
  }
  if (!all_finite()) throw DomainError("DenseMatrix: non-finite entry");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

bool DenseMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

void AttentionInputs::validate() const {
  const std::size_t n = q.rows();
  const std::size_t d = q.cols();
  if (n == 0 || d == 0) throw ShapeError("attention inputs: n and d must be >= 1");
  if (k.rows() != n || k.cols() != d || v.rows() != n || v.cols() != d) {
    throw ShapeError("attention inputs: Q, K, V must all be n x d");
  }
}

}  // namespace nmsparse
