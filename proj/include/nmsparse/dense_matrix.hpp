// Copyright 2026 The nmsparse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nmsparse {

/// Row-major matrix of finite doubles.
///
/// Construction from data validates the length and rejects NaN/Inf. Element
/// writes through `operator()` / `row()` are unchecked; callers that produce
/// non-finite values are responsible for them.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  bool all_finite() const;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Query/key/value triple for one attention head. All three are n x d.
struct AttentionInputs {
  DenseMatrix q;
  DenseMatrix k;
  DenseMatrix v;

  std::size_t seq_len() const { return q.rows(); }
  std::size_t head_dim() const { return q.cols(); }

  /// Throws ShapeError unless q, k, v share n >= 1 and d >= 1.
  void validate() const;
};

}  // namespace nmsparse
