// Copyright 2026 The nmsparse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>

#include "nmsparse/block_mask.hpp"
#include "nmsparse/dense_matrix.hpp"
#include "nmsparse/nm_codec.hpp"

namespace nmsparse {

/// out = decompress(a) * v, gathering V rows through the decoded metadata.
///
/// Entries in tiles absent from `a` are never visited. An extra `block_mask`
/// (any tile size covering `a`) additionally skips its cleared tiles.
/// TileInterleaved input is decoded first.
DenseMatrix spmm(const CompressedSparse& a, const DenseMatrix& v,
                 const std::optional<BlockMask>& block_mask = std::nullopt);

}  // namespace nmsparse
