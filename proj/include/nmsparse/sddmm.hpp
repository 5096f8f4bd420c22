// Copyright 2026 The nmsparse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>

#include "nmsparse/block_mask.hpp"
#include "nmsparse/dense_matrix.hpp"
#include "nmsparse/nm_codec.hpp"

namespace nmsparse {

/// Output tile of the fused score kernel. Edge tiles are clipped.
/// Defaults mirror the 32-row x 64-column pruning tile.
struct FusedTileConfig {
  std::size_t tile_rows = 32;
  std::size_t tile_cols = 64;
  std::size_t k_panel = 32;
};

/// Structural accounting of what the fused kernel touched.
struct FusedStats {
  std::size_t peak_tile_elems = 0;      // largest accumulator tile in use
  std::size_t dense_elems_written = 0;  // dense scores stored to the output; always 0
  std::size_t nonzeros_written = 0;
  std::size_t nibbles_written = 0;

  FusedStats& operator+=(const FusedStats& other);
  friend bool operator==(const FusedStats&, const FusedStats&) = default;
};

struct SddmmResult {
  CompressedSparse compressed;
  FusedStats stats;
};

/// Computes scale * Q K^T tile by tile and prunes each accumulator tile in its
/// epilogue, writing only nonzeros and metadata.
///
/// Without a mask the result equals compress_logical(gemm_scaled(q, k, scale))
/// bitwise. With a mask, cleared tiles are skipped and recorded as absent in
/// the result's tile grid; the mask's tile size must equal `tiles`.
SddmmResult sddmm_prune(const DenseMatrix& q, const DenseMatrix& k, SparsityMode mode,
                        double scale, const std::optional<BlockMask>& block_mask = std::nullopt,
                        const FusedTileConfig& tiles = {});

}  // namespace nmsparse
