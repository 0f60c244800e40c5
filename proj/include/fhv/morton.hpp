// Copyright 2026 The FHV Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>

#include "fhv/math.hpp"

namespace fhv {

inline constexpr int kMaxOctreeLevels = 20;

/// Leaf cell coordinates on a 2^levels grid.
struct Cell {
  std::uint32_t x = 0, y = 0, z = 0;
  friend constexpr bool operator==(const Cell&, const Cell&) = default;
};

/// Bit-interleaved index: x occupies bit 3i, y bit 3i+1, z bit 3i+2.
struct MortonCode {
  std::uint64_t value = 0;
  int levels = 0;
  friend constexpr bool operator==(const MortonCode&, const MortonCode&) = default;
};

MortonCode morton_encode(Cell cell, int levels);
Cell morton_decode(MortonCode code);

/// Unchecked interleave/deinterleave for hot paths (21 bits per axis).
std::uint64_t morton_interleave(std::uint32_t x, std::uint32_t y, std::uint32_t z);
Cell morton_deinterleave(std::uint64_t code);

/// floor(p * 2^levels) per axis; values at or above 1.0 land in the last cell
/// and tiny negative round-off lands in cell 0. Throws on non-finite input or
/// positions clearly outside the unit cube.
Cell cell_of(const Vec3& position, int levels);
Cell cell_of(const std::array<float, 3>& position, int levels);

}  // namespace fhv
