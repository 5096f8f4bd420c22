// Copyright 2026 The nmsparse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace nmsparse {

/// Blocked-ELL style tile presence grid layered over an N:M matrix.
///
/// Tile (tr, tc) covers rows [tr*tile_rows, (tr+1)*tile_rows) and columns
/// [tc*tile_cols, (tc+1)*tile_cols), clipped at the matrix edge. A cleared
/// tile is skipped entirely by the kernels.
class BlockMask {
 public:
  BlockMask() = default;
  BlockMask(std::size_t tile_rows, std::size_t tile_cols, std::size_t grid_rows,
            std::size_t grid_cols, bool kept = true);

  /// Grid that exactly covers a rows x cols matrix.
  static BlockMask covering(std::size_t rows, std::size_t cols, std::size_t tile_rows,
                            std::size_t tile_cols, bool kept = true);

  std::size_t tile_rows() const { return tile_rows_; }
  std::size_t tile_cols() const { return tile_cols_; }
  std::size_t grid_rows() const { return grid_rows_; }
  std::size_t grid_cols() const { return grid_cols_; }

  bool kept(std::size_t tr, std::size_t tc) const { return bits_[tr * grid_cols_ + tc] != 0; }
  void set(std::size_t tr, std::size_t tc, bool kept) { bits_[tr * grid_cols_ + tc] = kept ? 1 : 0; }

  bool covers(std::size_t rows, std::size_t cols) const;
  std::size_t kept_count() const;

  friend bool operator==(const BlockMask&, const BlockMask&) = default;

 private:
  std::size_t tile_rows_ = 1;
  std::size_t tile_cols_ = 1;
  std::size_t grid_rows_ = 0;
  std::size_t grid_cols_ = 0;
  std::vector<std::uint8_t> bits_;
};

}  // namespace nmsparse
