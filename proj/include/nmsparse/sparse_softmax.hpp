// Copyright 2026 The nmsparse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "nmsparse/nm_codec.hpp"

namespace nmsparse {

/// Row-wise stable softmax over the stored nonzeros only; metadata and tile
/// grid are carried over unchanged, so pruned slots stay zero.
///
/// Requires the logical layout. Throws ShapeError for a row with no stored
/// entries (every tile masked) and DomainError for NaN/Inf input.
CompressedSparse softmax_rows(const CompressedSparse& c);

}  // namespace nmsparse
