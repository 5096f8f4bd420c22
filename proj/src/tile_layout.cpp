// Copyright 2026 The nmsparse Authors
// SPDX-License-Identifier: Apache-2.0

#include "nmsparse/tile_layout.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nmsparse/errors.hpp"

namespace nmsparse {

namespace {

struct BlockGrid {
  std::size_t rows = 0;
  std::size_t blocks_per_row = 0;
  std::vector<std::uint16_t> blocks;

  std::uint16_t& at(std::size_t r, std::size_t b) { return blocks[r * blocks_per_row + b]; }
};

std::size_t check_tile_aligned(const CompressedSparse& c, const char* what) {
  if (c.tiles()) throw ShapeError(std::string(what) + ": tile-masked matrices are not supported");
  const std::size_t nibble_cols = c.dense_cols() / group_width(c.mode());
  if (c.rows() % kMetadataTileRows != 0 || nibble_cols % kNibblesPerWord != 0) {
    throw ShapeError(std::string(what) + ": " + std::to_string(c.rows()) + " rows x " +
                     std::to_string(nibble_cols) +
                     " nibble columns is not aligned to 32-row x 8-nibble tiles");
  }
  return nibble_cols;
}

void swap_sub_diagonal(BlockGrid& grid) {
  for (std::size_t i = 0; i < grid.rows; i += 2) {
    for (std::size_t j = 0; j < grid.blocks_per_row; j += 2) {
      std::swap(grid.at(i, j + 1), grid.at(i + 1, j));
    }
  }
}

}  // namespace

CompressedSparse tile_layout_encode(const CompressedSparse& logical) {
  if (logical.layout() != MetadataLayout::Logical) {
    throw ShapeError("tile_layout_encode: input must use the logical layout");
  }
  const std::size_t nibble_cols = check_tile_aligned(logical, "tile_layout_encode");
  const std::size_t rows = logical.rows();
  const auto meta = logical.metadata();

  BlockGrid grid{rows, nibble_cols / 4, std::vector<std::uint16_t>(rows * nibble_cols / 4)};
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t b = 0; b < grid.blocks_per_row; ++b) {
      std::uint16_t block = 0;
      for (std::size_t k = 0; k < 4; ++k) {
        block = static_cast<std::uint16_t>(block | (meta[r * nibble_cols + 4 * b + k] << (4 * k)));
      }
      grid.at(interleaved_row(r), b) = block;
    }
  }
  swap_sub_diagonal(grid);

  std::vector<std::uint8_t> stream(meta.size());
  const std::size_t words_per_row = grid.blocks_per_row / 2;
  for (std::size_t u = 0; u < words_per_row; ++u) {
    for (std::size_t r = 0; r < rows; ++r) {
      const std::uint32_t word = static_cast<std::uint32_t>(grid.at(r, 2 * u)) |
                                 (static_cast<std::uint32_t>(grid.at(r, 2 * u + 1)) << 16);
      const std::size_t base = (u * rows + r) * kNibblesPerWord;
      for (std::size_t k = 0; k < kNibblesPerWord; ++k) {
        stream[base + k] = static_cast<std::uint8_t>((word >> (4 * k)) & 0xf);
      }
    }
  }
  const auto nz = logical.nonzeros();
  return CompressedSparse(rows, logical.dense_cols(), logical.mode(),
                          MetadataLayout::TileInterleaved,
                          std::vector<double>(nz.begin(), nz.end()), std::move(stream));
}

CompressedSparse tile_layout_decode(const CompressedSparse& interleaved) {
  if (interleaved.layout() != MetadataLayout::TileInterleaved) {
    throw ShapeError("tile_layout_decode: input must use the tile-interleaved layout");
  }
  const std::size_t nibble_cols = check_tile_aligned(interleaved, "tile_layout_decode");
  const std::size_t rows = interleaved.rows();
  const auto stream = interleaved.metadata();

  BlockGrid grid{rows, nibble_cols / 4, std::vector<std::uint16_t>(rows * nibble_cols / 4)};
  const std::size_t words_per_row = grid.blocks_per_row / 2;
  for (std::size_t u = 0; u < words_per_row; ++u) {
    for (std::size_t r = 0; r < rows; ++r) {
      const std::size_t base = (u * rows + r) * kNibblesPerWord;
      std::uint32_t word = 0;
      for (std::size_t k = 0; k < kNibblesPerWord; ++k) {
        word |= static_cast<std::uint32_t>(stream[base + k]) << (4 * k);
      }
      grid.at(r, 2 * u) = static_cast<std::uint16_t>(word & 0xffff);
      grid.at(r, 2 * u + 1) = static_cast<std::uint16_t>(word >> 16);
    }
  }
  swap_sub_diagonal(grid);  // the swap is an involution

  std::vector<std::uint8_t> meta(stream.size());
  for (std::size_t dst = 0; dst < rows; ++dst) {
    const std::size_t r = deinterleaved_row(dst);
    for (std::size_t b = 0; b < grid.blocks_per_row; ++b) {
      const std::uint16_t block = grid.at(dst, b);
      for (std::size_t k = 0; k < 4; ++k) {
        meta[r * nibble_cols + 4 * b + k] = static_cast<std::uint8_t>((block >> (4 * k)) & 0xf);
      }
    }
  }
  const auto nz = interleaved.nonzeros();
  return CompressedSparse(rows, interleaved.dense_cols(), interleaved.mode(),
                          MetadataLayout::Logical, std::vector<double>(nz.begin(), nz.end()),
                          std::move(meta));
}

}  // namespace nmsparse
