// Copyright 2026 The nmsparse Authors
// SPDX-License-Identifier: Apache-2.0

#include "nmsparse/spmm.hpp"

#include <string>

#include "nmsparse/errors.hpp"
#include "nmsparse/tile_layout.hpp"

namespace nmsparse {

DenseMatrix spmm(const CompressedSparse& a, const DenseMatrix& v,
                 const std::optional<BlockMask>& block_mask) {
  if (a.layout() == MetadataLayout::TileInterleaved) {
    return spmm(tile_layout_decode(a), v, block_mask);
  }
  if (a.dense_cols() != v.rows()) {
    throw ShapeError("spmm: sparse cols " + std::to_string(a.dense_cols()) + " != V rows " +
                     std::to_string(v.rows()));
  }
  if (block_mask && !block_mask->covers(a.rows(), a.dense_cols())) {
    throw ShapeError("spmm: block mask grid does not cover the sparse matrix");
  }
  DenseMatrix out(a.rows(), v.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto orow = out.row(r);
    const std::size_t tr = block_mask ? r / block_mask->tile_rows() : 0;
    a.for_each_kept(r, [&](std::size_t col, double w) {
      if (block_mask && !block_mask->kept(tr, col / block_mask->tile_cols())) return;
      const auto vrow = v.row(col);
      for (std::size_t c = 0; c < v.cols(); ++c) orow[c] += w * vrow[c];
    });
  }
  return out;
}

}  // namespace nmsparse
