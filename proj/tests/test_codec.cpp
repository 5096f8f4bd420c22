// Copyright 2026 The nmsparse Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <array>
#include <set>
#include <vector>

#include "nmsparse/errors.hpp"
#include "nmsparse/nm_codec.hpp"
#include "nmsparse/random.hpp"
#include "oracles.hpp"

using namespace nmsparse;

namespace {

std::vector<std::uint8_t> kept_vec(const GroupSelection& s) {
  return {s.kept.begin(), s.kept.begin() + s.kept_count};
}

DenseMatrix tie_heavy(Rng& rng, std::size_t rows, std::size_t cols) {
  DenseMatrix m(rows, cols);
  for (double& x : m.data()) x = static_cast<double>(rng.below(3)) - 1.0;
  return m;
}

}  // namespace

TEST_CASE("mode parsing and widths") {
  CHECK(parse_sparsity_mode("1:2") == SparsityMode::OneOfTwo);
  CHECK(parse_sparsity_mode("2:4") == SparsityMode::TwoOfFour);
  CHECK_FALSE(parse_sparsity_mode("3:4").has_value());
  CHECK(to_string(SparsityMode::TwoOfFour) == "2:4");
  CHECK(group_width(SparsityMode::OneOfTwo) == 2);
  CHECK(group_width(SparsityMode::TwoOfFour) == 4);
}

TEST_CASE("select_group examples") {
  const auto one = select_group(std::vector<double>{3.0, -5.0}, SparsityMode::OneOfTwo);
  CHECK(kept_vec(one) == std::vector<std::uint8_t>{0});
  CHECK(one.nibble == 0x4);

  const auto second = select_group(std::vector<double>{-1.0, 2.0}, SparsityMode::OneOfTwo);
  CHECK(kept_vec(second) == std::vector<std::uint8_t>{1});
  CHECK(second.nibble == 0xe);

  const auto two = select_group(std::vector<double>{0.5, -1.2, 2.0, 0.1}, SparsityMode::TwoOfFour);
  CHECK(kept_vec(two) == std::vector<std::uint8_t>{0, 2});
  CHECK(two.nibble == 0x8);

  const auto ties = select_group(std::vector<double>{1, 1, 1, 1}, SparsityMode::TwoOfFour);
  CHECK(kept_vec(ties) == std::vector<std::uint8_t>{0, 1});
  CHECK(ties.nibble == 0x4);

  CHECK_THROWS_AS(select_group(std::vector<double>{1, 2, 3}, SparsityMode::TwoOfFour), ShapeError);
  CHECK_THROWS_AS(select_group(std::vector<double>{1, 2, 3, 4}, SparsityMode::OneOfTwo), ShapeError);
}

TEST_CASE("nibble tables") {
  std::set<int> one;
  std::set<int> two;
  for (int n = 0; n < 16; ++n) {
    if (is_legal_nibble(static_cast<std::uint8_t>(n), SparsityMode::OneOfTwo)) one.insert(n);
    if (is_legal_nibble(static_cast<std::uint8_t>(n), SparsityMode::TwoOfFour)) two.insert(n);
  }
  CHECK(one == std::set<int>{0x4, 0xe});
  CHECK(two == std::set<int>{0x4, 0x8, 0xc, 0x9, 0xd, 0xe});
  // Each legal nibble decodes to a strictly increasing slot pair lo | hi << 2.
  for (const int n : two) CHECK((n & 3) < (n >> 2));
  for (const int n : two) {
    const auto sel = decode_nibble(static_cast<std::uint8_t>(n), SparsityMode::TwoOfFour);
    CHECK(sel.kept[0] == (n & 3));
    CHECK(sel.kept[1] == (n >> 2));
  }
  CHECK_THROWS_WITH_AS(decode_nibble(0x1, SparsityMode::TwoOfFour),
                       doctest::Contains("malformed nibble"), FormatError);
  CHECK_THROWS_AS(decode_nibble(0x8, SparsityMode::OneOfTwo), FormatError);
}

TEST_CASE("select_group agrees with the sort oracle and the sum-pair rule") {
  Rng rng(21);
  for (int trial = 0; trial < 5000; ++trial) {
    std::array<double, 4> v{};
    const bool ties = trial % 2 == 0;
    for (double& x : v) x = ties ? static_cast<double>(rng.below(3)) : rng.normal();
    const auto sel = select_group(v, SparsityMode::TwoOfFour);
    const auto want = oracle::group_keep(v.data(), 4, 2);
    CHECK(sel.kept[0] == want[0]);
    CHECK(sel.kept[1] == want[1]);
    CHECK(is_legal_nibble(sel.nibble, SparsityMode::TwoOfFour));
    if (!ties) {
      const auto pair = oracle::best_sum_pair(v);
      CHECK(sel.kept[0] == pair.first);
      CHECK(sel.kept[1] == pair.second);
    }
  }
}

TEST_CASE("prune_dense examples") {
  const auto two = prune_dense(DenseMatrix(1, 4, {4, 3, 2, 1}), SparsityMode::TwoOfFour);
  CHECK(two.pruned == DenseMatrix(1, 4, {4, 3, 0, 0}));
  const auto one = prune_dense(DenseMatrix(1, 4, {1, 2, 3, 0}), SparsityMode::OneOfTwo);
  CHECK(one.pruned == DenseMatrix(1, 4, {0, 2, 3, 0}));
  CHECK(one.mask.kept(0, 1));
  CHECK_FALSE(one.mask.kept(0, 0));
  CHECK_THROWS_AS(prune_dense(DenseMatrix(1, 6), SparsityMode::TwoOfFour), ShapeError);
  CHECK_THROWS_AS(prune_dense(DenseMatrix(1, 3), SparsityMode::OneOfTwo), ShapeError);
}

TEST_CASE("prune properties: half density, structure, argmax survives") {
  Rng rng(22);
  for (const SparsityMode mode : {SparsityMode::OneOfTwo, SparsityMode::TwoOfFour}) {
    for (int trial = 0; trial < 20; ++trial) {
      const DenseMatrix m = trial % 2 ? gaussian_matrix(rng, 32, 64) : tie_heavy(rng, 32, 64);
      const auto result = prune_dense(m, mode);
      CHECK(result.mask.is_structured(mode));
      CHECK(result.mask.density() == 0.5);
      CHECK(oracle::bitwise_equal(result.pruned, oracle::prune(m, group_width(mode))));
      for (std::size_t r = 0; r < m.rows(); ++r) {
        CHECK(result.mask.row_count(r) * 2 == m.cols());
        const auto row = m.row(r);
        const auto best = std::max_element(row.begin(), row.end());
        CHECK(result.mask.kept(r, static_cast<std::size_t>(best - row.begin())));
      }
    }
  }
}

TEST_CASE("compress_logical examples") {
  const auto c = compress_logical(DenseMatrix(1, 4, {4, 3, 2, 1}), SparsityMode::TwoOfFour);
  CHECK(std::vector<double>(c.nonzeros().begin(), c.nonzeros().end()) == std::vector<double>{4, 3});
  CHECK(std::vector<std::uint8_t>(c.metadata().begin(), c.metadata().end()) ==
        std::vector<std::uint8_t>{0x4});

  const auto d = compress_logical(DenseMatrix(1, 4, {0.5, -1.2, 2.0, 0.1}), SparsityMode::TwoOfFour);
  CHECK(std::vector<double>(d.nonzeros().begin(), d.nonzeros().end()) ==
        std::vector<double>{0.5, 2.0});
  CHECK(d.metadata()[0] == 0x8);

  // Invariants of the logical form.
  const auto e = compress_logical(DenseMatrix(2, 8), SparsityMode::OneOfTwo);
  CHECK(e.nonzeros().size() == 2 * 8 / 2);
  CHECK(e.metadata().size() == 2 * (2 * 8 / 4));  // slot_cols / 4 per row
}

TEST_CASE("decompress examples") {
  const CompressedSparse two(1, 4, SparsityMode::TwoOfFour, MetadataLayout::Logical, {4, 3}, {0x4});
  CHECK(decompress(two) == DenseMatrix(1, 4, {4, 3, 0, 0}));
  const CompressedSparse one(1, 2, SparsityMode::OneOfTwo, MetadataLayout::Logical, {7.5}, {0xe});
  CHECK(decompress(one) == DenseMatrix(1, 2, {0, 7.5}));
  CHECK_THROWS_WITH_AS(
      CompressedSparse(1, 4, SparsityMode::TwoOfFour, MetadataLayout::Logical, {4, 3}, {0x5}),
      doctest::Contains("malformed nibble"), FormatError);
  CHECK_THROWS_AS(
      CompressedSparse(1, 4, SparsityMode::TwoOfFour, MetadataLayout::Logical, {4}, {0x4}),
      ShapeError);
}

TEST_CASE("compress/decompress round trip equals the prune oracle bitwise") {
  Rng rng(23);
  for (const SparsityMode mode : {SparsityMode::OneOfTwo, SparsityMode::TwoOfFour}) {
    const DenseMatrix big = gaussian_matrix(rng, 64, 128);
    CHECK(oracle::bitwise_equal(decompress(compress_logical(big, mode)),
                                oracle::prune(big, group_width(mode))));
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t rows = 1 + rng.below(9);
      const std::size_t cols = group_width(mode) * (1 + rng.below(9));
      const DenseMatrix m = trial % 2 ? gaussian_matrix(rng, rows, cols) : tie_heavy(rng, rows, cols);
      const auto c = compress_logical(m, mode);
      CHECK(oracle::bitwise_equal(decompress(c), oracle::prune(m, group_width(mode))));
      // Re-compressing the decompressed image is the identity when every kept
      // value is positive.
      DenseMatrix positive = m;
      for (double& x : positive.data()) x = std::abs(x) + 1.0;
      const auto p = compress_logical(positive, mode);
      CHECK(compress_logical(decompress(p), mode) == p);
    }
  }
}

TEST_CASE("for_each_kept visits kept entries in column order") {
  const auto c = compress_logical(DenseMatrix(1, 8, {1, 5, 2, 4, 9, 0, 0, 9}), SparsityMode::TwoOfFour);
  std::vector<std::size_t> cols;
  std::vector<double> values;
  c.for_each_kept(0, [&](std::size_t col, double v) {
    cols.push_back(col);
    values.push_back(v);
  });
  CHECK(cols == std::vector<std::size_t>{1, 3, 4, 7});
  CHECK(values == std::vector<double>{5, 4, 9, 9});
}
