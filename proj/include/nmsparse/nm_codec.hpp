// Copyright 2026 The nmsparse Authors
// SPDX-License-Identifier: Apache-2.0

// N:M group selection and the logical nonzeros + metadata encoding.
//
// Metadata is expressed on a grid of 2-byte slots, four slots per group:
//
//   TwoOfFour  one slot per element, four elements per group.
//   OneOfTwo   two slots per 32-bit element, two elements per group, so the
//              kept element occupies slots {0,1} or {2,3}.
//
// A group's nibble records its two kept slots as `lo | hi << 2` with lo < hi.
// OneOfTwo therefore only ever produces 0x4 and 0xe; TwoOfFour produces one of
// six values {0x4, 0x8, 0xc, 0x9, 0xd, 0xe}.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "nmsparse/block_mask.hpp"
#include "nmsparse/dense_matrix.hpp"

namespace nmsparse {

enum class SparsityMode : std::uint8_t { OneOfTwo = 1, TwoOfFour = 2 };

/// Dense elements per selection group (2 or 4).
constexpr std::size_t group_width(SparsityMode mode) {
  return mode == SparsityMode::OneOfTwo ? 2 : 4;
}
/// Elements kept per group (1 or 2). Always half of group_width.
constexpr std::size_t kept_per_group(SparsityMode mode) { return group_width(mode) / 2; }
/// 2-byte metadata slots per dense element.
constexpr std::size_t slots_per_element(SparsityMode mode) {
  return mode == SparsityMode::OneOfTwo ? 2 : 1;
}

std::string_view to_string(SparsityMode mode);
/// Accepts "1:2" / "2:4" (and the enum spellings).
std::optional<SparsityMode> parse_sparsity_mode(std::string_view text);

bool is_legal_nibble(std::uint8_t nibble, SparsityMode mode);

/// Outcome of selecting within one group. `kept` holds element indices
/// (not slots), ascending; only the first `kept_count` entries are used.
struct GroupSelection {
  std::array<std::uint8_t, 2> kept{};
  std::uint8_t kept_count = 0;
  std::uint8_t nibble = 0;

  friend bool operator==(const GroupSelection&, const GroupSelection&) = default;
};

/// Keeps the largest kept_per_group(mode) values by signed value; ties go to
/// the lower index. Throws ShapeError if values.size() != group_width(mode).
GroupSelection select_group(std::span<const double> values, SparsityMode mode);

/// Inverse of the nibble assignment. Throws FormatError("malformed nibble ...")
/// for values outside the mode's admissible set.
GroupSelection decode_nibble(std::uint8_t nibble, SparsityMode mode);

/// Binary keep/drop mask over a dense matrix (1 = keep).
class PruneMask {
 public:
  PruneMask() = default;
  PruneMask(std::size_t rows, std::size_t cols, bool kept = false);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool kept(std::size_t r, std::size_t c) const { return bits_[r * cols_ + c] != 0; }
  void set(std::size_t r, std::size_t c, bool kept) { bits_[r * cols_ + c] = kept ? 1 : 0; }

  std::size_t row_count(std::size_t r) const;
  double density() const;
  /// True when every group of every row keeps exactly kept_per_group(mode).
  bool is_structured(SparsityMode mode) const;

  friend bool operator==(const PruneMask&, const PruneMask&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint8_t> bits_;
};

struct PruneResult {
  DenseMatrix pruned;
  PruneMask mask;
};

/// Applies select_group to every group of every row. Throws ShapeError if
/// cols is not a multiple of group_width(mode).
PruneResult prune_dense(const DenseMatrix& m, SparsityMode mode);

enum class MetadataLayout : std::uint8_t { Logical = 0, TileInterleaved = 1 };

/// N:M compressed matrix: kept values plus one metadata nibble per group.
///
/// Logical layout stores, per row, the kept values in column order and the
/// group nibbles in column order. TileInterleaved keeps the same nonzeros but
/// stores the nibbles in the hardware stream order (see tile_layout.hpp).
///
/// An optional tile grid marks blocked-ELL tiles that are absent: such tiles
/// store neither nonzeros nor nibbles, so a row only holds data for the
/// present tiles of its tile-row, in column order.
class CompressedSparse {
 public:
  CompressedSparse() = default;
  /// Validates sizes and nibble legality; throws ShapeError / FormatError.
  CompressedSparse(std::size_t rows, std::size_t dense_cols, SparsityMode mode,
                   MetadataLayout layout, std::vector<double> nonzeros,
                   std::vector<std::uint8_t> metadata, std::optional<BlockMask> tiles = {});

  std::size_t rows() const { return rows_; }
  std::size_t dense_cols() const { return dense_cols_; }
  SparsityMode mode() const { return mode_; }
  MetadataLayout layout() const { return layout_; }
  const std::optional<BlockMask>& tiles() const { return tiles_; }

  std::span<const double> nonzeros() const { return nonzeros_; }
  std::span<const std::uint8_t> metadata() const { return metadata_; }

  std::span<const double> row_nonzeros(std::size_t r) const;
  std::span<double> mutable_row_nonzeros(std::size_t r);
  /// Logical layout only.
  std::span<const std::uint8_t> row_metadata(std::size_t r) const;

  /// Calls fn(column, value) for every kept entry of row r in column order.
  /// Logical layout only.
  template <typename Fn>
  void for_each_kept(std::size_t r, Fn&& fn) const;

  /// Calls fn(col_begin, col_end) for every stored column range of row r.
  template <typename Fn>
  void for_each_segment(std::size_t r, Fn&& fn) const;

  friend bool operator==(const CompressedSparse&, const CompressedSparse&) = default;

 private:
  void require_logical(const char* what) const;
  void build_row_offsets();

  std::size_t rows_ = 0;
  std::size_t dense_cols_ = 0;
  SparsityMode mode_ = SparsityMode::OneOfTwo;
  MetadataLayout layout_ = MetadataLayout::Logical;
  std::vector<double> nonzeros_;
  std::vector<std::uint8_t> metadata_;
  std::optional<BlockMask> tiles_;
  std::vector<std::size_t> row_offsets_;  // nonzero offsets, rows + 1 entries
};

/// Prunes and compresses in one pass (Logical layout, no tile mask).
CompressedSparse compress_logical(const DenseMatrix& m, SparsityMode mode);

/// Scatters nonzeros back to a dense matrix; pruned slots and absent tiles are
/// zero. TileInterleaved input is decoded first.
DenseMatrix decompress(const CompressedSparse& c);

template <typename Fn>
void CompressedSparse::for_each_segment(std::size_t r, Fn&& fn) const {
  if (!tiles_) {
    fn(std::size_t{0}, dense_cols_);
    return;
  }
  const std::size_t tr = r / tiles_->tile_rows();
  for (std::size_t tc = 0; tc < tiles_->grid_cols(); ++tc) {
    if (!tiles_->kept(tr, tc)) continue;
    const std::size_t begin = tc * tiles_->tile_cols();
    const std::size_t end = begin + tiles_->tile_cols() < dense_cols_
                                ? begin + tiles_->tile_cols()
                                : dense_cols_;
    fn(begin, end);
  }
}

template <typename Fn>
void CompressedSparse::for_each_kept(std::size_t r, Fn&& fn) const {
  require_logical("for_each_kept");
  const auto values = row_nonzeros(r);
  const auto nibbles = row_metadata(r);
  const std::size_t width = group_width(mode_);
  const std::size_t keep = kept_per_group(mode_);
  std::size_t group = 0;
  for_each_segment(r, [&](std::size_t begin, std::size_t end) {
    for (std::size_t c = begin; c < end; c += width, ++group) {
      const GroupSelection sel = decode_nibble(nibbles[group], mode_);
      for (std::size_t t = 0; t < keep; ++t) fn(c + sel.kept[t], values[group * keep + t]);
    }
  });
}

}  // namespace nmsparse
