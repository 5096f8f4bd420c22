// Copyright 2026 The nmsparse Authors
// SPDX-License-Identifier: Apache-2.0

#include "nmsparse/container.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

#include "nmsparse/errors.hpp"

namespace nmsparse {

namespace {

constexpr std::uint8_t kMagic[4] = {'N', 'M', 'C', 'S'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_le(std::span<const std::uint8_t> bytes, std::size_t offset, int width) {
  std::uint64_t v = 0;
  for (int i = 0; i < width; ++i) {
    v |= static_cast<std::uint64_t>(bytes[offset + static_cast<std::size_t>(i)]) << (8 * i);
  }
  return v;
}

struct Header {
  SparsityMode mode;
  MetadataLayout layout;
  std::size_t rows;
  std::size_t dense_cols;
  std::size_t nonzeros;
  std::size_t nibbles;
};

Header parse_header(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kContainerHeaderBytes) throw FormatError("NMCS: truncated header");
  if (!std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin())) {
    throw FormatError("NMCS: bad magic");
  }
  if (bytes[4] != kContainerVersion) {
    throw FormatError("NMCS: unsupported version " + std::to_string(bytes[4]));
  }
  if (bytes[5] != 1 && bytes[5] != 2) {
    throw FormatError("NMCS: unknown mode byte " + std::to_string(bytes[5]));
  }
  if (bytes[6] > 1) throw FormatError("NMCS: unknown layout byte " + std::to_string(bytes[6]));
  Header h{static_cast<SparsityMode>(bytes[5]), static_cast<MetadataLayout>(bytes[6]),
           static_cast<std::size_t>(get_le(bytes, 7, 4)),
           static_cast<std::size_t>(get_le(bytes, 11, 4)), 0, 0};
  if (h.dense_cols % group_width(h.mode) != 0) {
    throw FormatError("NMCS: dense_cols not a multiple of the group width");
  }
  h.nonzeros = h.rows * h.dense_cols / 2;
  h.nibbles = h.nonzeros / kept_per_group(h.mode);
  const std::size_t expected = kContainerHeaderBytes + 8 * h.nonzeros + (h.nibbles + 1) / 2;
  if (bytes.size() != expected) {
    throw FormatError("NMCS: expected " + std::to_string(expected) + " bytes, got " +
                      std::to_string(bytes.size()));
  }
  return h;
}

}  // namespace

std::vector<std::uint8_t> serialize(const CompressedSparse& c) {
  if (c.tiles()) throw ShapeError("serialize: tile-masked matrices have no NMCS representation");
  if (c.rows() > std::numeric_limits<std::uint32_t>::max() ||
      c.dense_cols() > std::numeric_limits<std::uint32_t>::max()) {
    throw ShapeError("serialize: dimensions exceed u32");
  }
  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  out.reserve(kContainerHeaderBytes + 8 * c.nonzeros().size() + (c.metadata().size() + 1) / 2);
  out.push_back(kContainerVersion);
  out.push_back(static_cast<std::uint8_t>(c.mode()));
  out.push_back(static_cast<std::uint8_t>(c.layout()));
  put_u32(out, static_cast<std::uint32_t>(c.rows()));
  put_u32(out, static_cast<std::uint32_t>(c.dense_cols()));
  for (const double v : c.nonzeros()) put_u64(out, std::bit_cast<std::uint64_t>(v));
  const auto meta = c.metadata();
  for (std::size_t i = 0; i < meta.size(); i += 2) {
    const std::uint8_t hi = i + 1 < meta.size() ? meta[i + 1] : 0;
    out.push_back(static_cast<std::uint8_t>((meta[i] & 0xf) | (hi << 4)));
  }
  return out;
}

CompressedSparse deserialize(std::span<const std::uint8_t> bytes) {
  const Header h = parse_header(bytes);
  std::vector<double> nonzeros(h.nonzeros);
  std::size_t offset = kContainerHeaderBytes;
  for (double& v : nonzeros) {
    v = std::bit_cast<double>(get_le(bytes, offset, 8));
    offset += 8;
  }
  std::vector<std::uint8_t> nibbles(h.nibbles);
  for (std::size_t i = 0; i < h.nibbles; ++i) {
    const std::uint8_t byte = bytes[offset + i / 2];
    nibbles[i] = i % 2 == 0 ? (byte & 0xf) : (byte >> 4);
  }
  if (h.nibbles % 2 == 1 && (bytes.back() >> 4) != 0) {
    throw FormatError("NMCS: nonzero padding nibble");
  }
  return CompressedSparse(h.rows, h.dense_cols, h.mode, h.layout, std::move(nonzeros),
                          std::move(nibbles));
}

void write_container(const std::filesystem::path& path, const CompressedSparse& c) {
  const auto bytes = serialize(c);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

CompressedSparse read_container(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  return deserialize(bytes);
}

std::uint64_t container_payload_bits(std::span<const std::uint8_t> bytes,
                                     std::uint64_t element_bits) {
  const Header h = parse_header(bytes);
  const std::uint64_t metadata_bytes = bytes.size() - kContainerHeaderBytes - 8 * h.nonzeros;
  return h.nonzeros * element_bits + metadata_bytes * 8;
}

}  // namespace nmsparse
