// Copyright 2026 The nmsparse Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <vector>

#include "nmsparse/errors.hpp"
#include "nmsparse/random.hpp"
#include "nmsparse/sddmm.hpp"
#include "nmsparse/spmm.hpp"
#include "nmsparse/tile_layout.hpp"
#include "oracles.hpp"

using namespace nmsparse;

TEST_CASE("identity keeps V") {
  Rng rng(71);
  const DenseMatrix v = gaussian_matrix(rng, 4, 3);
  const auto a = compress_logical(DenseMatrix::identity(4), SparsityMode::OneOfTwo);
  CHECK(spmm(a, v) == v);
}

TEST_CASE("a single nonzero selects one row of V") {
  Rng rng(72);
  const DenseMatrix v = gaussian_matrix(rng, 4, 5);
  std::vector<double> nz(8, 0.0);
  std::vector<std::uint8_t> meta(8, 0x4);
  nz[2 * 2 + 1] = 2.5;   // row 2, second group
  meta[2 * 2 + 1] = 0xe;  // keeps element 1 of the group, i.e. column 3
  const CompressedSparse a(4, 4, SparsityMode::OneOfTwo, MetadataLayout::Logical, nz, meta);
  const DenseMatrix out = spmm(a, v);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 5; ++c) CHECK(out(r, c) == (r == 2 ? 2.5 * v(3, c) : 0.0));
  }
}

TEST_CASE("spmm matches decompress then dense matmul") {
  Rng rng(73);
  for (const SparsityMode mode : {SparsityMode::OneOfTwo, SparsityMode::TwoOfFour}) {
    const auto a = compress_logical(gaussian_matrix(rng, 64, 64), mode);
    const DenseMatrix v = gaussian_matrix(rng, 64, 16);
    const DenseMatrix want = oracle::matmul(decompress(a), v);
    CHECK(oracle::rel_frobenius(spmm(a, v), want) <= 1e-12);
    CHECK(oracle::rel_frobenius(spmm(tile_layout_encode(a), v), want) <= 1e-12);

    // Linear in V.
    DenseMatrix v3 = v;
    for (double& x : v3.data()) x *= -3.0;
    DenseMatrix out3 = spmm(a, v);
    for (double& x : out3.data()) x *= -3.0;
    CHECK(oracle::rel_frobenius(spmm(a, v3), out3) <= 1e-12);
  }
}

TEST_CASE("block masks contribute zero") {
  Rng rng(74);
  const DenseMatrix q = gaussian_matrix(rng, 64, 8);
  const DenseMatrix k = gaussian_matrix(rng, 128, 8);
  const DenseMatrix v = gaussian_matrix(rng, 128, 6);
  BlockMask mask = BlockMask::covering(64, 128, 32, 64, true);
  mask.set(0, 1, false);
  const auto masked = sddmm_prune(q, k, SparsityMode::OneOfTwo, 1.0, mask).compressed;
  CHECK(oracle::rel_frobenius(spmm(masked, v), oracle::matmul(decompress(masked), v)) <= 1e-12);

  // Mask applied at multiply time to an unmasked operand.
  const auto full = compress_logical(oracle::scaled_product(q, k, 1.0), SparsityMode::OneOfTwo);
  const DenseMatrix want = oracle::matmul(
      oracle::mask_tiles(decompress(full), 32, 64,
                         [&](std::size_t tr, std::size_t tc) { return mask.kept(tr, tc); }),
      v);
  CHECK(oracle::rel_frobenius(spmm(full, v, mask), want) <= 1e-12);

  CHECK_THROWS_AS(spmm(full, v, BlockMask::covering(32, 128, 32, 64)), ShapeError);
  CHECK_THROWS_AS(spmm(full, gaussian_matrix(rng, 64, 6)), ShapeError);
}
