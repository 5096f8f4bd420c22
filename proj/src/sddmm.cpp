// Copyright 2026 The nmsparse Authors
// SPDX-License-Identifier: Apache-2.0

#include "nmsparse/sddmm.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "nmsparse/errors.hpp"
#include "tile_kernel.hpp"

namespace nmsparse {

FusedStats& FusedStats::operator+=(const FusedStats& other) {
  peak_tile_elems = std::max(peak_tile_elems, other.peak_tile_elems);
  dense_elems_written += other.dense_elems_written;
  nonzeros_written += other.nonzeros_written;
  nibbles_written += other.nibbles_written;
  return *this;
}

namespace {

void validate(const DenseMatrix& q, const DenseMatrix& k, SparsityMode mode,
              const std::optional<BlockMask>& block_mask, const FusedTileConfig& tiles) {
  if (tiles.tile_rows == 0 || tiles.tile_cols == 0 || tiles.k_panel == 0) {
    throw ShapeError("sddmm_prune: tile sizes must be >= 1");
  }
  if (q.cols() != k.cols()) {
    throw ShapeError("sddmm_prune: Q and K head dimensions differ (" + std::to_string(q.cols()) +
                     " vs " + std::to_string(k.cols()) + ")");
  }
  const std::size_t width = group_width(mode);
  if (k.rows() % width != 0) {
    throw ShapeError("sddmm_prune: key count " + std::to_string(k.rows()) +
                     " not a multiple of group width " + std::to_string(width));
  }
  if (tiles.tile_cols % width != 0) {
    throw ShapeError("sddmm_prune: tile_cols must be a multiple of the group width");
  }
  if (block_mask) {
    if (block_mask->tile_rows() != tiles.tile_rows || block_mask->tile_cols() != tiles.tile_cols ||
        !block_mask->covers(q.rows(), k.rows())) {
      throw ShapeError("sddmm_prune: block mask grid does not match the kernel tile grid");
    }
  }
}

}  // namespace

SddmmResult sddmm_prune(const DenseMatrix& q, const DenseMatrix& k, SparsityMode mode,
                        double scale, const std::optional<BlockMask>& block_mask,
                        const FusedTileConfig& tiles) {
  validate(q, k, mode, block_mask, tiles);
  const std::size_t rows = q.rows();
  const std::size_t cols = k.rows();
  const std::size_t width = group_width(mode);
  const std::size_t keep = kept_per_group(mode);
  const std::size_t grid_rows = (rows + tiles.tile_rows - 1) / tiles.tile_rows;
  const std::size_t grid_cols = (cols + tiles.tile_cols - 1) / tiles.tile_cols;
  auto present = [&](std::size_t tr, std::size_t tc) {
    return !block_mask || block_mask->kept(tr, tc);
  };
  auto tile_width = [&](std::size_t tc) {
    return std::min(tiles.tile_cols, cols - tc * tiles.tile_cols);
  };

  // Nonzero offset of each present tile inside a row of its tile-row, and the
  // number of nonzeros per row of each tile-row.
  std::vector<std::size_t> tile_offset(grid_rows * grid_cols, 0);
  std::vector<std::size_t> row_nonzeros(grid_rows, 0);
  for (std::size_t tr = 0; tr < grid_rows; ++tr) {
    std::size_t offset = 0;
    for (std::size_t tc = 0; tc < grid_cols; ++tc) {
      tile_offset[tr * grid_cols + tc] = offset;
      if (present(tr, tc)) offset += tile_width(tc) / 2;
    }
    row_nonzeros[tr] = offset;
  }
  std::vector<std::size_t> row_base(rows + 1, 0);
  for (std::size_t r = 0; r < rows; ++r) {
    row_base[r + 1] = row_base[r] + row_nonzeros[r / tiles.tile_rows];
  }

  std::vector<double> nonzeros(row_base.back());
  std::vector<std::uint8_t> metadata(row_base.back() / keep);
  std::vector<double> acc(tiles.tile_rows * tiles.tile_cols);
  FusedStats stats;

  for (std::size_t tr = 0; tr < grid_rows; ++tr) {
    const std::size_t r0 = tr * tiles.tile_rows;
    const std::size_t tile_rows = std::min(tiles.tile_rows, rows - r0);
    for (std::size_t tc = 0; tc < grid_cols; ++tc) {
      if (!present(tr, tc)) continue;
      const std::size_t c0 = tc * tiles.tile_cols;
      const std::size_t tile_cols = tile_width(tc);
      detail::accumulate_tile(q, k, r0, tile_rows, c0, tile_cols, tiles.k_panel, acc);
      stats.peak_tile_elems = std::max(stats.peak_tile_elems, tile_rows * tile_cols);

      // Epilogue: scale, select, and emit straight from the accumulator.
      for (std::size_t i = 0; i < tile_rows; ++i) {
        const std::span<double> row(acc.data() + i * tile_cols, tile_cols);
        for (double& v : row) v = scale * v;
        std::size_t out = row_base[r0 + i] + tile_offset[tr * grid_cols + tc];
        for (std::size_t g = 0; g < tile_cols; g += width) {
          const GroupSelection sel = select_group(row.subspan(g, width), mode);
          metadata[out / keep] = sel.nibble;
          ++stats.nibbles_written;
          for (std::size_t t = 0; t < keep; ++t) {
            nonzeros[out++] = row[g + sel.kept[t]];
            ++stats.nonzeros_written;
          }
        }
      }
    }
  }

  std::optional<BlockMask> grid;
  if (block_mask) grid = *block_mask;
  return {CompressedSparse(rows, cols, mode, MetadataLayout::Logical, std::move(nonzeros),
                           std::move(metadata), std::move(grid)),
          stats};
}

}  // namespace nmsparse
