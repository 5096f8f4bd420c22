// Copyright 2026 The nmsparse Authors
// SPDX-License-Identifier: Apache-2.0

#include "nmsparse/nm_codec.hpp"

#include <algorithm>
#include <string>

#include "nmsparse/errors.hpp"
#include "nmsparse/tile_layout.hpp"

namespace nmsparse {

namespace {

constexpr std::uint8_t nibble_for_slots(std::size_t lo, std::size_t hi) {
  return static_cast<std::uint8_t>(lo | (hi << 2));
}

void require_mode(SparsityMode mode) {
  if (mode != SparsityMode::OneOfTwo && mode != SparsityMode::TwoOfFour) {
    throw FormatError("unknown sparsity mode " + std::to_string(static_cast<int>(mode)));
  }
}

}  // namespace

std::string_view to_string(SparsityMode mode) {
  return mode == SparsityMode::OneOfTwo ? "1:2" : "2:4";
}

std::optional<SparsityMode> parse_sparsity_mode(std::string_view text) {
  if (text == "1:2" || text == "OneOfTwo") return SparsityMode::OneOfTwo;
  if (text == "2:4" || text == "TwoOfFour") return SparsityMode::TwoOfFour;
  return std::nullopt;
}

bool is_legal_nibble(std::uint8_t nibble, SparsityMode mode) {
  if (nibble > 0xf) return false;
  const std::size_t lo = nibble & 0x3;
  const std::size_t hi = nibble >> 2;
  if (lo >= hi) return false;
  if (mode == SparsityMode::OneOfTwo) return nibble == 0x4 || nibble == 0xe;
  return true;
}

GroupSelection select_group(std::span<const double> values, SparsityMode mode) {
  require_mode(mode);
  if (values.size() != group_width(mode)) {
    throw ShapeError("select_group: expected " + std::to_string(group_width(mode)) +
                     " values, got " + std::to_string(values.size()));
  }
  GroupSelection sel;
  if (mode == SparsityMode::OneOfTwo) {
    const std::uint8_t keep = values[1] > values[0] ? 1 : 0;
    sel.kept = {keep, 0};
    sel.kept_count = 1;
    sel.nibble = nibble_for_slots(2u * keep, 2u * keep + 1);
    return sel;
  }
  // Top-2 by value, first occurrence wins on ties.
  std::size_t first = 0;
  for (std::size_t i = 1; i < 4; ++i) {
    if (values[i] > values[first]) first = i;
  }
  std::size_t second = first == 0 ? 1 : 0;
  for (std::size_t i = 0; i < 4; ++i) {
    if (i != first && values[i] > values[second]) second = i;
  }
  const std::size_t lo = std::min(first, second);
  const std::size_t hi = std::max(first, second);
  sel.kept = {static_cast<std::uint8_t>(lo), static_cast<std::uint8_t>(hi)};
  sel.kept_count = 2;
  sel.nibble = nibble_for_slots(lo, hi);
  return sel;
}

GroupSelection decode_nibble(std::uint8_t nibble, SparsityMode mode) {
  if (!is_legal_nibble(nibble, mode)) {
    throw FormatError("malformed nibble 0x" + std::string(1, "0123456789abcdef"[nibble & 0xf]) +
                      " for mode " + std::string(to_string(mode)));
  }
  GroupSelection sel;
  sel.nibble = nibble;
  const auto lo = static_cast<std::uint8_t>(nibble & 0x3);
  const auto hi = static_cast<std::uint8_t>(nibble >> 2);
  if (mode == SparsityMode::OneOfTwo) {
    sel.kept = {static_cast<std::uint8_t>(lo / 2), 0};
    sel.kept_count = 1;
  } else {
    sel.kept = {lo, hi};
    sel.kept_count = 2;
  }
  return sel;
}

PruneMask::PruneMask(std::size_t rows, std::size_t cols, bool kept)
    : rows_(rows), cols_(cols), bits_(rows * cols, kept ? 1 : 0) {}

std::size_t PruneMask::row_count(std::size_t r) const {
  const auto begin = bits_.begin() + static_cast<std::ptrdiff_t>(r * cols_);
  return static_cast<std::size_t>(std::count(begin, begin + static_cast<std::ptrdiff_t>(cols_), 1));
}

double PruneMask::density() const {
  if (bits_.empty()) return 0.0;
  return static_cast<double>(std::count(bits_.begin(), bits_.end(), 1)) /
         static_cast<double>(bits_.size());
}

bool PruneMask::is_structured(SparsityMode mode) const {
  const std::size_t width = group_width(mode);
  if (cols_ % width != 0) return false;
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; c += width) {
      std::size_t count = 0;
      for (std::size_t i = 0; i < width; ++i) count += kept(r, c + i) ? 1 : 0;
      if (count != kept_per_group(mode)) return false;
    }
  }
  return true;
}

PruneResult prune_dense(const DenseMatrix& m, SparsityMode mode) {
  require_mode(mode);
  const std::size_t width = group_width(mode);
  if (m.cols() % width != 0) {
    throw ShapeError("prune_dense: cols " + std::to_string(m.cols()) +
                     " not a multiple of group width " + std::to_string(width));
  }
  PruneResult out{DenseMatrix(m.rows(), m.cols()), PruneMask(m.rows(), m.cols())};
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    for (std::size_t c = 0; c < m.cols(); c += width) {
      const GroupSelection sel = select_group(row.subspan(c, width), mode);
      for (std::size_t t = 0; t < sel.kept_count; ++t) {
        const std::size_t col = c + sel.kept[t];
        out.pruned(r, col) = row[col];
        out.mask.set(r, col, true);
      }
    }
  }
  return out;
}

CompressedSparse::CompressedSparse(std::size_t rows, std::size_t dense_cols, SparsityMode mode,
                                   MetadataLayout layout, std::vector<double> nonzeros,
                                   std::vector<std::uint8_t> metadata,
                                   std::optional<BlockMask> tiles)
    : rows_(rows),
      dense_cols_(dense_cols),
      mode_(mode),
      layout_(layout),
      nonzeros_(std::move(nonzeros)),
      metadata_(std::move(metadata)),
      tiles_(std::move(tiles)) {
  require_mode(mode_);
  if (layout_ != MetadataLayout::Logical && layout_ != MetadataLayout::TileInterleaved) {
    throw FormatError("unknown metadata layout " + std::to_string(static_cast<int>(layout_)));
  }
  const std::size_t width = group_width(mode_);
  if (dense_cols_ % width != 0) {
    throw ShapeError("CompressedSparse: dense_cols " + std::to_string(dense_cols_) +
                     " not a multiple of group width " + std::to_string(width));
  }
  if (tiles_) {
    if (!tiles_->covers(rows_, dense_cols_)) {
      throw ShapeError("CompressedSparse: tile grid does not cover the matrix");
    }
    if (tiles_->tile_cols() % width != 0) {
      throw ShapeError("CompressedSparse: tile_cols must be a multiple of the group width");
    }
    if (layout_ != MetadataLayout::Logical) {
      throw ShapeError("CompressedSparse: tile-masked matrices must use the logical layout");
    }
  }
  build_row_offsets();
  if (nonzeros_.size() != row_offsets_.back()) {
    throw ShapeError("CompressedSparse: expected " + std::to_string(row_offsets_.back()) +
                     " nonzeros, got " + std::to_string(nonzeros_.size()));
  }
  if (metadata_.size() != nonzeros_.size() / kept_per_group(mode_)) {
    throw ShapeError("CompressedSparse: expected " +
                     std::to_string(nonzeros_.size() / kept_per_group(mode_)) +
                     " metadata nibbles, got " + std::to_string(metadata_.size()));
  }
  for (const std::uint8_t nibble : metadata_) decode_nibble(nibble, mode_);
}

void CompressedSparse::build_row_offsets() {
  row_offsets_.assign(rows_ + 1, 0);
  for (std::size_t r = 0; r < rows_; ++r) {
    std::size_t stored = 0;
    for_each_segment(r, [&](std::size_t begin, std::size_t end) { stored += end - begin; });
    row_offsets_[r + 1] = row_offsets_[r] + stored / 2;
  }
}

void CompressedSparse::require_logical(const char* what) const {
  if (layout_ != MetadataLayout::Logical) {
    throw ShapeError(std::string(what) + ": requires the logical metadata layout");
  }
}

std::span<const double> CompressedSparse::row_nonzeros(std::size_t r) const {
  return std::span<const double>(nonzeros_).subspan(row_offsets_[r],
                                                    row_offsets_[r + 1] - row_offsets_[r]);
}

std::span<double> CompressedSparse::mutable_row_nonzeros(std::size_t r) {
  return std::span<double>(nonzeros_).subspan(row_offsets_[r],
                                              row_offsets_[r + 1] - row_offsets_[r]);
}

std::span<const std::uint8_t> CompressedSparse::row_metadata(std::size_t r) const {
  require_logical("row_metadata");
  const std::size_t keep = kept_per_group(mode_);
  return std::span<const std::uint8_t>(metadata_).subspan(
      row_offsets_[r] / keep, (row_offsets_[r + 1] - row_offsets_[r]) / keep);
}

CompressedSparse compress_logical(const DenseMatrix& m, SparsityMode mode) {
  require_mode(mode);
  const std::size_t width = group_width(mode);
  if (m.cols() % width != 0) {
    throw ShapeError("compress_logical: cols " + std::to_string(m.cols()) +
                     " not a multiple of group width " + std::to_string(width));
  }
  std::vector<double> nonzeros;
  std::vector<std::uint8_t> metadata;
  nonzeros.reserve(m.size() / 2);
  metadata.reserve(m.size() / width);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    for (std::size_t c = 0; c < m.cols(); c += width) {
      const GroupSelection sel = select_group(row.subspan(c, width), mode);
      for (std::size_t t = 0; t < sel.kept_count; ++t) nonzeros.push_back(row[c + sel.kept[t]]);
      metadata.push_back(sel.nibble);
    }
  }
  return CompressedSparse(m.rows(), m.cols(), mode, MetadataLayout::Logical, std::move(nonzeros),
                          std::move(metadata));
}

DenseMatrix decompress(const CompressedSparse& c) {
  if (c.layout() == MetadataLayout::TileInterleaved) return decompress(tile_layout_decode(c));
  DenseMatrix out(c.rows(), c.dense_cols());
  for (std::size_t r = 0; r < c.rows(); ++r) {
    c.for_each_kept(r, [&](std::size_t col, double value) { out(r, col) = value; });
  }
  return out;
}

}  // namespace nmsparse
