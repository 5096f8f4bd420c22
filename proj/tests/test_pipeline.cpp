// Copyright 2026 The nmsparse Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "nmsparse/errors.hpp"
#include "nmsparse/gemm.hpp"
#include "nmsparse/pipeline.hpp"
#include "nmsparse/random.hpp"
#include "nmsparse/sparse_softmax.hpp"
#include "nmsparse/spmm.hpp"
#include "oracles.hpp"

using namespace nmsparse;

namespace {

AttentionInputs random_inputs(Rng& rng, std::size_t n, std::size_t d) {
  return {gaussian_matrix(rng, n, d), gaussian_matrix(rng, n, d), gaussian_matrix(rng, n, d)};
}

// Independent reference: prune the dense scores, softmax over kept entries,
// multiply by V.
DenseMatrix reference_dfss(const AttentionInputs& in, std::size_t width) {
  const DenseMatrix scores =
      oracle::scaled_product(in.q, in.k, 1.0 / std::sqrt(static_cast<double>(in.head_dim())));
  DenseMatrix weights(scores.rows(), scores.cols());
  for (std::size_t r = 0; r < scores.rows(); ++r) {
    std::vector<std::size_t> cols;
    for (std::size_t c = 0; c < scores.cols(); c += width) {
      for (const std::size_t i : oracle::group_keep(scores.row(r).data() + c, width, width / 2)) cols.push_back(c + i);
    }
    std::vector<double> kept;
    for (const std::size_t c : cols) kept.push_back(scores(r, c));
    const auto w = oracle::softmax(kept);
    for (std::size_t i = 0; i < cols.size(); ++i) weights(r, cols[i]) = w[i];
  }
  return oracle::matmul(weights, in.v);
}

}  // namespace

TEST_CASE("single query padded to one group returns the V row") {
  Rng rng(81);
  const DenseMatrix q = gaussian_matrix(rng, 1, 4);
  const DenseMatrix k1 = gaussian_matrix(rng, 1, 4);
  const DenseMatrix v1 = gaussian_matrix(rng, 1, 4);
  // Pad the key/value sequence by repeating the only row; the tie keeps slot 0.
  DenseMatrix k(2, 4);
  DenseMatrix v(2, 4);
  for (std::size_t c = 0; c < 4; ++c) {
    k(0, c) = k(1, c) = k1(0, c);
    v(0, c) = v(1, c) = v1(0, c);
  }
  // dfss_attention wants square inputs, so run its stages on the 1 x 2 case.
  const DenseMatrix out = spmm(softmax_rows(sddmm_prune(q, k, SparsityMode::OneOfTwo, 0.5).compressed), v);
  for (std::size_t c = 0; c < 4; ++c) CHECK(out(0, c) == v1(0, c));
  CHECK_THROWS_AS(dfss_attention(AttentionInputs{q, k1, v1}, SparsityMode::OneOfTwo), ShapeError);
}

TEST_CASE("identical keys keep the even columns") {
  Rng rng(82);
  const std::size_t n = 16;
  const DenseMatrix key_row = gaussian_matrix(rng, 1, 8);
  DenseMatrix k(n, 8);
  for (std::size_t r = 0; r < n; ++r) std::copy(key_row.row(0).begin(), key_row.row(0).end(), k.row(r).begin());
  const AttentionInputs in{gaussian_matrix(rng, n, 8), k, gaussian_matrix(rng, n, 8)};
  const DenseMatrix out = dfss_attention(in, SparsityMode::OneOfTwo);
  for (std::size_t c = 0; c < 8; ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < n; r += 2) mean += in.v(r, c);
    mean /= static_cast<double>(n / 2);
    for (std::size_t r = 0; r < n; ++r) CHECK(std::abs(out(r, c) - mean) <= 1e-12);
  }
}

TEST_CASE("dfss equals the staged pipeline bitwise and the reference closely") {
  Rng rng(83);
  const AttentionInputs in = random_inputs(rng, 64, 16);
  for (const SparsityMode mode : {SparsityMode::OneOfTwo, SparsityMode::TwoOfFour}) {
    const DenseMatrix got = dfss_attention(in, mode);
    const auto staged = compress_logical(gemm_scaled(in.q, in.k, 0.25), mode);
    CHECK(oracle::bitwise_equal(got, spmm(softmax_rows(staged), in.v)));
    CHECK(oracle::rel_frobenius(got, reference_dfss(in, group_width(mode))) <= 1e-12);

    for (std::size_t c = 0; c < in.v.cols(); ++c) {
      double lo = in.v(0, c);
      double hi = lo;
      for (std::size_t r = 0; r < in.v.rows(); ++r) {
        lo = std::min(lo, in.v(r, c));
        hi = std::max(hi, in.v(r, c));
      }
      for (std::size_t r = 0; r < got.rows(); ++r) {
        CHECK(got(r, c) >= lo - 1e-12);
        CHECK(got(r, c) <= hi + 1e-12);
      }
    }
  }
}

TEST_CASE("dfss with a block mask") {
  Rng rng(84);
  const AttentionInputs small = random_inputs(rng, 64, 8);
  BlockMask mask = BlockMask::covering(64, 64, 32, 64, true);
  mask.set(1, 0, false);
  CHECK_THROWS_AS(dfss_attention(small, SparsityMode::OneOfTwo, mask), ShapeError);  // empty rows
  const AttentionInputs in = random_inputs(rng, 128, 8);
  BlockMask wide = BlockMask::covering(128, 128, 32, 64, true);
  wide.set(1, 1, false);
  const DenseMatrix got = dfss_attention(in, SparsityMode::OneOfTwo, wide);
  const DenseMatrix top = dfss_attention(in, SparsityMode::OneOfTwo);
  // Rows whose tiles are all present are unaffected.
  for (std::size_t r = 0; r < 32; ++r) {
    for (std::size_t c = 0; c < 8; ++c) CHECK(got(r, c) == top(r, c));
  }
  // Rows 32..63 attend only to the 1:2 survivors among the first 64 keys.
  const double scale = 1.0 / std::sqrt(8.0);
  for (std::size_t r = 32; r < 64; ++r) {
    DenseMatrix scores(1, 64);
    for (std::size_t j = 0; j < 64; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < 8; ++k) acc += in.q(r, k) * in.k(j, k);
      scores(0, j) = acc * scale;
    }
    std::vector<double> logits;
    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < 64; j += 2) {
      const std::size_t keep = j + oracle::group_keep(scores.row(0).data() + j, 2, 1)[0];
      logits.push_back(scores(0, keep));
      cols.push_back(keep);
    }
    const std::vector<double> w = oracle::softmax(logits);
    for (std::size_t c = 0; c < 8; ++c) {
      double want = 0.0;
      for (std::size_t i = 0; i < cols.size(); ++i) want += w[i] * in.v(cols[i], c);
      CHECK(std::abs(got(r, c) - want) <= 1e-12);
    }
  }
}

TEST_CASE("approx_error") {
  Rng rng(85);
  const DenseMatrix a = gaussian_matrix(rng, 8, 4);
  const ApproxError same = approx_error(a, a);
  CHECK(same.rel_l2 == 0.0);
  CHECK(same.max_abs == 0.0);
  const ApproxError zero = approx_error(a, DenseMatrix(8, 4));
  CHECK(zero.rel_l2 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(zero.row_rel.size() == 8);
  for (const double r : zero.row_rel) CHECK(r == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(approx_error(a, DenseMatrix(4, 8)), ShapeError);
  CHECK_THROWS_AS(approx_error(DenseMatrix(2, 2), a), ShapeError);
  CHECK_THROWS_AS(approx_error(DenseMatrix(8, 4), a), DomainError);
}

TEST_CASE("heatmaps") {
  Rng rng(86);
  SUBCASE("uniform scores double the kept weights") {
    const std::size_t n = 8;
    const AttentionInputs in{DenseMatrix(n, 4), gaussian_matrix(rng, n, 4), gaussian_matrix(rng, n, 4)};
    const auto h = attention_heatmap(in, SparsityMode::OneOfTwo);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        CHECK(h.dense(r, c) == doctest::Approx(1.0 / n).epsilon(1e-14));
        CHECK(h.sparse(r, c) == doctest::Approx(c % 2 == 0 ? 2.0 / n : 0.0).epsilon(1e-14));
      }
    }
  }
  SUBCASE("a dominant score gives one-hot rows") {
    DenseMatrix big = DenseMatrix::identity(8);
    for (double& x : big.data()) x *= 40.0;
    const auto h = attention_heatmap({big, big, gaussian_matrix(rng, 8, 8)}, SparsityMode::TwoOfFour);
    CHECK(oracle::max_abs_diff(h.dense, DenseMatrix::identity(8)) <= 1e-12);
    CHECK(oracle::max_abs_diff(h.sparse, DenseMatrix::identity(8)) <= 1e-12);
  }
  SUBCASE("kept entries dominate the dense weights") {
    for (const SparsityMode mode : {SparsityMode::OneOfTwo, SparsityMode::TwoOfFour}) {
      const auto in = random_inputs(rng, 128, 32);
      const auto h = attention_heatmap(in, mode);
      CHECK(oracle::bitwise_equal(h.dense, full_attention_weights(in)));
      const auto kept = prune_dense(gemm_scaled(in.q, in.k, 1.0 / std::sqrt(32.0)), mode).mask;
      for (std::size_t r = 0; r < 128; ++r) {
        for (std::size_t c = 0; c < 128; ++c) {
          if (kept.kept(r, c)) {
            CHECK(h.sparse(r, c) >= h.dense(r, c));
          } else {
            CHECK(h.sparse(r, c) == 0.0);
          }
        }
      }
    }
  }
}
