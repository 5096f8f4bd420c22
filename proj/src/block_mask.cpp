// Copyright 2026 The nmsparse Authors
// SPDX-License-Identifier: Apache-2.0

#include "nmsparse/block_mask.hpp"

#include <algorithm>

#include "nmsparse/errors.hpp"

namespace nmsparse {

BlockMask::BlockMask(std::size_t tile_rows, std::size_t tile_cols, std::size_t grid_rows,
                     std::size_t grid_cols, bool kept)
    : tile_rows_(tile_rows),
      tile_cols_(tile_cols),
      grid_rows_(grid_rows),
      grid_cols_(grid_cols),
      bits_(grid_rows * grid_cols, kept ? 1 : 0) {
  if (tile_rows == 0 || tile_cols == 0) throw ShapeError("BlockMask: tile sizes must be >= 1");
}

BlockMask BlockMask::covering(std::size_t rows, std::size_t cols, std::size_t tile_rows,
                              std::size_t tile_cols, bool kept) {
  if (tile_rows == 0 || tile_cols == 0) throw ShapeError("BlockMask: tile sizes must be >= 1");
  return BlockMask(tile_rows, tile_cols, (rows + tile_rows - 1) / tile_rows,
                   (cols + tile_cols - 1) / tile_cols, kept);
}

bool BlockMask::covers(std::size_t rows, std::size_t cols) const {
  return grid_rows_ == (rows + tile_rows_ - 1) / tile_rows_ &&
         grid_cols_ == (cols + tile_cols_ - 1) / tile_cols_;
}

std::size_t BlockMask::kept_count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

}  // namespace nmsparse
