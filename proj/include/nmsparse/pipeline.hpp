// Copyright 2026 The nmsparse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <vector>

#include "nmsparse/block_mask.hpp"
#include "nmsparse/dense_matrix.hpp"
#include "nmsparse/nm_codec.hpp"
#include "nmsparse/sddmm.hpp"

namespace nmsparse {

/// Drop-in sparse attention: fused score+prune, sparse softmax, SpMM.
/// No n x n dense matrix is formed on this path.
DenseMatrix dfss_attention(const AttentionInputs& in, SparsityMode mode,
                           const std::optional<BlockMask>& block_mask = std::nullopt,
                           const FusedTileConfig& tiles = {});

struct ApproxError {
  double rel_l2 = 0.0;   // ||full - sparse||_F / ||full||_F
  double max_abs = 0.0;  // max |full - sparse|
  /// Per-row ||full_i - sparse_i|| / ||full_i||; rows where full_i == 0 report
  /// the absolute norm of the difference.
  std::vector<double> row_rel;
};

/// Throws ShapeError on shape mismatch, DomainError if `full` is all zero.
ApproxError approx_error(const DenseMatrix& full, const DenseMatrix& sparse);

struct AttentionHeatmap {
  DenseMatrix dense;   // Softmax(QK^T/sqrt(d))
  DenseMatrix sparse;  // decompressed N:M attention weights
};

AttentionHeatmap attention_heatmap(const AttentionInputs& in, SparsityMode mode);

}  // namespace nmsparse
