// Copyright 2026 The nmsparse Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <map>
#include <set>
#include <utility>
#include <vector>

#include "nmsparse/errors.hpp"
#include "nmsparse/random.hpp"
#include "nmsparse/tile_layout.hpp"
#include "oracles.hpp"

using namespace nmsparse;

namespace {

// Literal transcription of the layout steps, written independently of the
// library: blocks keyed by (row, block column), each step a fresh map.
std::vector<std::uint8_t> reference_stream(const CompressedSparse& logical) {
  const std::size_t rows = logical.rows();
  const std::size_t nibble_cols = logical.metadata().size() / rows;
  const std::size_t block_cols = nibble_cols / 4;

  std::map<std::pair<std::size_t, std::size_t>, unsigned> blocks;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t b = 0; b < block_cols; ++b) {
      unsigned v = 0;
      for (std::size_t k = 0; k < 4; ++k) v |= unsigned{logical.metadata()[r * nibble_cols + 4 * b + k]} << (4 * k);
      blocks[{r, b}] = v;
    }
  }
  std::map<std::pair<std::size_t, std::size_t>, unsigned> interleaved;
  for (const auto& [key, v] : blocks) {
    const std::size_t row = key.first;
    const std::size_t dst = (row / 32) * 32 + (row % 8) * 4 + (row % 32) / 8;
    interleaved[{dst, key.second}] = v;
  }
  std::map<std::pair<std::size_t, std::size_t>, unsigned> switched = interleaved;
  for (std::size_t i = 0; 2 * i < rows; ++i) {
    for (std::size_t j = 0; 2 * j < block_cols; ++j) {
      switched[{2 * i, 2 * j + 1}] = interleaved[{2 * i + 1, 2 * j}];
      switched[{2 * i + 1, 2 * j}] = interleaved[{2 * i, 2 * j + 1}];
    }
  }
  std::vector<std::uint8_t> stream;
  for (std::size_t u = 0; u < block_cols / 2; ++u) {
    for (std::size_t r = 0; r < rows; ++r) {
      const unsigned long word = switched[{r, 2 * u}] | (static_cast<unsigned long>(switched[{r, 2 * u + 1}]) << 16);
      for (std::size_t k = 0; k < 8; ++k) stream.push_back(static_cast<std::uint8_t>((word >> (4 * k)) & 0xf));
    }
  }
  return stream;
}

DenseMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  DenseMatrix m(rows, cols);
  for (double& x : m.data()) x = rng.below(2) ? rng.normal() : static_cast<double>(rng.below(3));
  return m;
}

}  // namespace

TEST_CASE("row interleave formula") {
  CHECK(interleaved_row(9) == 5);
  CHECK(interleaved_row(0) == 0);
  CHECK(interleaved_row(8) == 1);
  CHECK(interleaved_row(1) == 4);
  CHECK(interleaved_row(31) == 31);
  CHECK(interleaved_row(32 + 9) == 32 + 5);
  std::set<std::size_t> image;
  for (std::size_t r = 0; r < 96; ++r) {
    image.insert(interleaved_row(r));
    CHECK(deinterleaved_row(interleaved_row(r)) == r);
    CHECK(interleaved_row(r) / 32 == r / 32);
  }
  CHECK(image.size() == 96);
}

TEST_CASE("encode matches the step-by-step reference and keeps nonzeros") {
  Rng rng(31);
  for (const SparsityMode mode : {SparsityMode::OneOfTwo, SparsityMode::TwoOfFour}) {
    for (int trial = 0; trial < 30; ++trial) {
      const std::size_t rows = 32 * (1 + rng.below(3));
      const std::size_t cols = 8 * group_width(mode) * (1 + rng.below(4));
      const auto logical = compress_logical(random_matrix(rng, rows, cols), mode);
      const auto tiled = tile_layout_encode(logical);
      CHECK(tiled.layout() == MetadataLayout::TileInterleaved);
      CHECK(std::vector<std::uint8_t>(tiled.metadata().begin(), tiled.metadata().end()) ==
            reference_stream(logical));
      CHECK(std::vector<double>(tiled.nonzeros().begin(), tiled.nonzeros().end()) ==
            std::vector<double>(logical.nonzeros().begin(), logical.nonzeros().end()));
    }
  }
}

TEST_CASE("encode/decode is a bijection") {
  Rng rng(32);
  for (const SparsityMode mode : {SparsityMode::OneOfTwo, SparsityMode::TwoOfFour}) {
    for (int trial = 0; trial < 1000; ++trial) {
      const auto logical = compress_logical(random_matrix(rng, 32, 8 * group_width(mode)), mode);
      const auto tiled = tile_layout_encode(logical);
      CHECK(tile_layout_decode(tiled) == logical);
      CHECK(tile_layout_encode(tile_layout_decode(tiled)) == tiled);
      CHECK(oracle::bitwise_equal(decompress(tiled), decompress(logical)));
    }
  }
}

TEST_CASE("misaligned or wrong-layout input is rejected") {
  const auto short_rows = compress_logical(DenseMatrix(16, 32), SparsityMode::TwoOfFour);
  CHECK_THROWS_AS(tile_layout_encode(short_rows), ShapeError);
  const auto narrow = compress_logical(DenseMatrix(32, 16), SparsityMode::TwoOfFour);  // 4 nibbles
  CHECK_THROWS_AS(tile_layout_encode(narrow), ShapeError);
  const auto ok = compress_logical(DenseMatrix(32, 32), SparsityMode::TwoOfFour);
  CHECK_THROWS_AS(tile_layout_decode(ok), ShapeError);
  CHECK_THROWS_AS(tile_layout_encode(tile_layout_encode(ok)), ShapeError);
  CHECK_THROWS_AS(tile_layout_encode(ok).row_metadata(0), ShapeError);
}
