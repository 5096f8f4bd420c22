// Copyright 2026 The nmsparse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>

#include "nmsparse/dense_matrix.hpp"

namespace nmsparse {

/// Output tile and reduction panel sizes for the blocked score GEMM.
struct TileConfig {
  std::size_t tile_rows = 64;
  std::size_t tile_cols = 64;
  std::size_t k_panel = 32;

  void validate() const;
};

/// out = scale * A * B^T for A (n x d) and B (m x d).
///
/// Every output element is reduced over k in ascending order starting from
/// +0.0, then multiplied by `scale` once. The result is therefore bitwise
/// independent of the tile configuration and equal to a naive triple loop
/// with the same order.
DenseMatrix gemm_scaled(const DenseMatrix& a, const DenseMatrix& b, double scale,
                        const TileConfig& tiles = {});

/// out = A * B (A: n x k, B: k x m); reduction over k in ascending order.
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);

/// Max-shifted softmax of `in` into `out` (same length, non-empty).
/// Three passes: max, sum of exponentials in index order, normalize.
void stable_softmax(std::span<const double> in, std::span<double> out);

/// Row-wise stable softmax of a dense matrix.
DenseMatrix softmax_rows_dense(const DenseMatrix& scores);

/// Softmax(Q K^T / sqrt(d)) V, the dense baseline.
DenseMatrix full_attention(const AttentionInputs& in);

/// Dense attention weights Softmax(Q K^T / sqrt(d)).
DenseMatrix full_attention_weights(const AttentionInputs& in);

}  // namespace nmsparse
