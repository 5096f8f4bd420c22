// Copyright 2026 The nmsparse Authors
// SPDX-License-Identifier: Apache-2.0

// NMCS binary container for CompressedSparse.
//
//   offset  size  field
//   0       4     magic "NMCS"
//   4       1     version (1)
//   5       1     mode    (1 = 1:2, 2 = 2:4)
//   6       1     layout  (0 = logical, 1 = tile-interleaved)
//   7       4     rows        u32 little-endian
//   11      4     dense_cols  u32 little-endian
//   15      8*N   nonzeros, IEEE-754 binary64 little-endian, row-major
//   ...     ceil(M/2)  metadata nibbles, two per byte, low nibble first
//
// N = rows * dense_cols / 2 and M = N / kept_per_group(mode). An odd nibble
// count leaves the final high nibble zero. Tile-masked matrices have no
// container representation.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "nmsparse/nm_codec.hpp"

namespace nmsparse {

inline constexpr std::uint8_t kContainerVersion = 1;
inline constexpr std::size_t kContainerHeaderBytes = 15;

std::vector<std::uint8_t> serialize(const CompressedSparse& c);

/// Throws FormatError on bad magic/version/enum bytes, truncation, trailing
/// bytes, or an illegal nibble ("malformed nibble").
CompressedSparse deserialize(std::span<const std::uint8_t> bytes);

void write_container(const std::filesystem::path& path, const CompressedSparse& c);
CompressedSparse read_container(const std::filesystem::path& path);

/// Payload size of a serialized container in bits, with each stored nonzero
/// accounted at `element_bits` and the metadata section at its byte size.
/// The header is excluded.
std::uint64_t container_payload_bits(std::span<const std::uint8_t> bytes,
                                     std::uint64_t element_bits);

}  // namespace nmsparse
