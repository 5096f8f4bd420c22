// Copyright 2026 The nmsparse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstddef>
#include <span>

#include "nmsparse/dense_matrix.hpp"

namespace nmsparse::detail {

// Accumulates the (rows x cols) block of A * B^T starting at (row0, col0)
// into `acc` (leading dimension `cols`). Each element's reduction runs over
// k in ascending order; the panel split only changes loop nesting.
inline void accumulate_tile(const DenseMatrix& a, const DenseMatrix& b, std::size_t row0,
                            std::size_t rows, std::size_t col0, std::size_t cols,
                            std::size_t k_panel, std::span<double> acc) {
  const std::size_t depth = a.cols();
  std::fill(acc.begin(), acc.begin() + static_cast<std::ptrdiff_t>(rows * cols), 0.0);
  for (std::size_t k0 = 0; k0 < depth; k0 += k_panel) {
    const std::size_t k1 = std::min(depth, k0 + k_panel);
    for (std::size_t i = 0; i < rows; ++i) {
      const auto arow = a.row(row0 + i);
      for (std::size_t j = 0; j < cols; ++j) {
        const auto brow = b.row(col0 + j);
        double sum = acc[i * cols + j];
        for (std::size_t k = k0; k < k1; ++k) sum += arow[k] * brow[k];
        acc[i * cols + j] = sum;
      }
    }
  }
}

}  // namespace nmsparse::detail
