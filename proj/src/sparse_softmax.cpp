// Copyright 2026 The nmsparse Authors
// SPDX-License-Identifier: Apache-2.0

#include "nmsparse/sparse_softmax.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "nmsparse/errors.hpp"
#include "nmsparse/gemm.hpp"

namespace nmsparse {

CompressedSparse softmax_rows(const CompressedSparse& c) {
  if (c.layout() != MetadataLayout::Logical) {
    throw ShapeError("softmax_rows: requires the logical metadata layout");
  }
  CompressedSparse out = c;
  std::vector<double> cached;
  for (std::size_t r = 0; r < out.rows(); ++r) {
    auto values = out.mutable_row_nonzeros(r);
    if (values.empty()) {
      throw ShapeError("softmax_rows: row " + std::to_string(r) + " has no stored entries");
    }
    if (!std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); })) {
      throw DomainError("softmax_rows: non-finite score in row " + std::to_string(r));
    }
    cached.assign(values.begin(), values.end());
    stable_softmax(cached, values);
  }
  return out;
}

}  // namespace nmsparse
