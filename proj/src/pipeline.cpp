// Copyright 2026 The nmsparse Authors
// SPDX-License-Identifier: Apache-2.0

#include "nmsparse/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "nmsparse/errors.hpp"
#include "nmsparse/gemm.hpp"
#include "nmsparse/sparse_softmax.hpp"
#include "nmsparse/spmm.hpp"

namespace nmsparse {

namespace {

double inv_sqrt_dim(const AttentionInputs& in) {
  return 1.0 / std::sqrt(static_cast<double>(in.head_dim()));
}

}  // namespace

DenseMatrix dfss_attention(const AttentionInputs& in, SparsityMode mode,
                           const std::optional<BlockMask>& block_mask,
                           const FusedTileConfig& tiles) {
  in.validate();
  auto scores = sddmm_prune(in.q, in.k, mode, inv_sqrt_dim(in), block_mask, tiles);
  return spmm(softmax_rows(scores.compressed), in.v);
}

ApproxError approx_error(const DenseMatrix& full, const DenseMatrix& sparse) {
  if (full.rows() != sparse.rows() || full.cols() != sparse.cols()) {
    throw ShapeError("approx_error: shape mismatch");
  }
  ApproxError err;
  err.row_rel.resize(full.rows());
  double diff_total = 0.0;
  double full_total = 0.0;
  for (std::size_t r = 0; r < full.rows(); ++r) {
    double diff_sq = 0.0;
    double full_sq = 0.0;
    for (std::size_t c = 0; c < full.cols(); ++c) {
      const double diff = full(r, c) - sparse(r, c);
      diff_sq += diff * diff;
      full_sq += full(r, c) * full(r, c);
      err.max_abs = std::max(err.max_abs, std::abs(diff));
    }
    err.row_rel[r] = full_sq > 0.0 ? std::sqrt(diff_sq / full_sq) : std::sqrt(diff_sq);
    diff_total += diff_sq;
    full_total += full_sq;
  }
  if (full_total == 0.0) throw DomainError("approx_error: reference matrix is all zero");
  err.rel_l2 = std::sqrt(diff_total) / std::sqrt(full_total);
  return err;
}

AttentionHeatmap attention_heatmap(const AttentionInputs& in, SparsityMode mode) {
  in.validate();
  auto scores = sddmm_prune(in.q, in.k, mode, inv_sqrt_dim(in));
  return {full_attention_weights(in), decompress(softmax_rows(scores.compressed))};
}

}  // namespace nmsparse
