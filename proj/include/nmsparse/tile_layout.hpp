// Copyright 2026 The nmsparse Authors
// SPDX-License-Identifier: Apache-2.0

// Hardware metadata layout for 32-row tiles.
//
// Starting from the logical nibble grid (rows x nibble_cols):
//   1. Four consecutive nibbles of a row form one 16-bit block, nibble k in
//      bits [4k, 4k+3].
//   2. Block rows are interleaved by 8 within each 32-row tile:
//        dst_row = floor(row/32)*32 + (row%8)*4 + floor((row%32)/8)
//   3. On the (interleaved row, block column) grid, each 2x2 cell swaps its
//      upper-right and lower-left blocks: (2i, 2j+1) <-> (2i+1, 2j).
//   4. Blocks (r, 2u) and (r, 2u+1) fuse into one 32-bit word (low half first)
//      and words are emitted column-major: word index = u * rows + r.
// The word stream is stored as nibbles, least significant nibble first, so
// the metadata vector keeps its length. Nonzeros are untouched.

#pragma once

#include <cstddef>

#include "nmsparse/nm_codec.hpp"

namespace nmsparse {

inline constexpr std::size_t kMetadataTileRows = 32;
/// Logical nibble columns per tile-layout unit (two 16-bit blocks).
inline constexpr std::size_t kNibblesPerWord = 8;

/// Row permutation of step 2, applied to an absolute row index.
constexpr std::size_t interleaved_row(std::size_t row) {
  return row / 32 * 32 + (row % 8) * 4 + (row % 32) / 8;
}

/// Inverse of interleaved_row.
constexpr std::size_t deinterleaved_row(std::size_t dst) {
  return dst / 32 * 32 + (dst % 4) * 8 + (dst % 32) / 4;
}

/// Logical -> TileInterleaved. Requires rows % 32 == 0, nibbles per row a
/// multiple of 8 and no tile mask; throws ShapeError otherwise.
CompressedSparse tile_layout_encode(const CompressedSparse& logical);

/// TileInterleaved -> Logical, exact inverse of tile_layout_encode.
CompressedSparse tile_layout_decode(const CompressedSparse& interleaved);

}  // namespace nmsparse
