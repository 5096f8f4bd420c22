// Copyright 2026 The nmsparse Authors
// SPDX-License-Identifier: Apache-2.0

#include "nmsparse/gemm.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "nmsparse/errors.hpp"
#include "tile_kernel.hpp"

namespace nmsparse {

void TileConfig::validate() const {
  if (tile_rows == 0 || tile_cols == 0 || k_panel == 0) {
    throw ShapeError("TileConfig: tile sizes must be >= 1");
  }
}

DenseMatrix gemm_scaled(const DenseMatrix& a, const DenseMatrix& b, double scale,
                        const TileConfig& tiles) {
  tiles.validate();
  if (a.cols() != b.cols()) {
    throw ShapeError("gemm_scaled: inner dimensions differ (" + std::to_string(a.cols()) +
                     " vs " + std::to_string(b.cols()) + ")");
  }
  DenseMatrix out(a.rows(), b.rows());
  std::vector<double> acc(tiles.tile_rows * tiles.tile_cols);
  for (std::size_t r0 = 0; r0 < a.rows(); r0 += tiles.tile_rows) {
    const std::size_t rows = std::min(tiles.tile_rows, a.rows() - r0);
    for (std::size_t c0 = 0; c0 < b.rows(); c0 += tiles.tile_cols) {
      const std::size_t cols = std::min(tiles.tile_cols, b.rows() - c0);
      detail::accumulate_tile(a, b, r0, rows, c0, cols, tiles.k_panel, acc);
      for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) out(r0 + i, c0 + j) = scale * acc[i * cols + j];
      }
    }
  }
  return out;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: inner dimensions differ (" + std::to_string(a.cols()) + " vs " +
                     std::to_string(b.rows()) + ")");
  }
  DenseMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto orow = out.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const double w = a(i, j);
      const auto brow = b.row(j);
      for (std::size_t c = 0; c < b.cols(); ++c) orow[c] += w * brow[c];
    }
  }
  return out;
}

void stable_softmax(std::span<const double> in, std::span<double> out) {
  if (in.empty() || in.size() != out.size()) {
    throw ShapeError("stable_softmax: empty input or length mismatch");
  }
  const double max = *std::max_element(in.begin(), in.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < in.size(); ++i) {
    out[i] = std::exp(in[i] - max);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
}

DenseMatrix softmax_rows_dense(const DenseMatrix& scores) {
  DenseMatrix out(scores.rows(), scores.cols());
  for (std::size_t r = 0; r < scores.rows(); ++r) stable_softmax(scores.row(r), out.row(r));
  return out;
}

DenseMatrix full_attention_weights(const AttentionInputs& in) {
  in.validate();
  const double scale = 1.0 / std::sqrt(static_cast<double>(in.head_dim()));
  return softmax_rows_dense(gemm_scaled(in.q, in.k, scale));
}

DenseMatrix full_attention(const AttentionInputs& in) {
  return matmul(full_attention_weights(in), in.v);
}

}  // namespace nmsparse
