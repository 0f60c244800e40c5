// Copyright 2026 The FHV Authors
// SPDX-License-Identifier: Apache-2.0

#include "fhv/morton.hpp"

#include <cmath>
#include <string>

#include "fhv/error.hpp"

namespace fhv {
namespace {

std::uint64_t spread3(std::uint64_t v) {
  v &= 0x1fffff;
  v = (v | v << 32) & 0x1f00000000ffffULL;
  v = (v | v << 16) & 0x1f0000ff0000ffULL;
  v = (v | v << 8) & 0x100f00f00f00f00fULL;
  v = (v | v << 4) & 0x10c30c30c30c30c3ULL;
  v = (v | v << 2) & 0x1249249249249249ULL;
  return v;
}

std::uint32_t compact3(std::uint64_t v) {
  v &= 0x1249249249249249ULL;
  v = (v ^ (v >> 2)) & 0x10c30c30c30c30c3ULL;
  v = (v ^ (v >> 4)) & 0x100f00f00f00f00fULL;
  v = (v ^ (v >> 8)) & 0x1f0000ff0000ffULL;
  v = (v ^ (v >> 16)) & 0x1f00000000ffffULL;
  v = (v ^ (v >> 32)) & 0x1fffff;
  return static_cast<std::uint32_t>(v);
}

void check_levels(int levels) {
  if (levels < 0 || levels > kMaxOctreeLevels) {
    throw std::out_of_range("octree levels must lie in [0, " + std::to_string(kMaxOctreeLevels) + "]");
  }
}

std::uint32_t axis_cell(double v, int levels) {
  if (!std::isfinite(v)) throw Error("cell_of: non-finite position");
  if (v < -1e-6 || v > 1.0 + 1e-6) throw std::out_of_range("cell_of: position outside the unit cube");
  const std::uint32_t n = std::uint32_t{1} << levels;
  const double scaled = std::floor(v * static_cast<double>(n));
  if (scaled <= 0.0) return 0;
  if (scaled >= n - 1.0) return n - 1;
  return static_cast<std::uint32_t>(scaled);
}

}  // namespace

std::uint64_t morton_interleave(std::uint32_t x, std::uint32_t y, std::uint32_t z) {
  return spread3(x) | (spread3(y) << 1) | (spread3(z) << 2);
}

Cell morton_deinterleave(std::uint64_t code) { return {compact3(code), compact3(code >> 1), compact3(code >> 2)}; }

MortonCode morton_encode(Cell cell, int levels) {
  check_levels(levels);
  const std::uint64_t n = std::uint64_t{1} << levels;
  if (cell.x >= n || cell.y >= n || cell.z >= n) throw std::out_of_range("morton_encode: cell index out of range");
  return {morton_interleave(cell.x, cell.y, cell.z), levels};
}

Cell morton_decode(MortonCode code) {
  check_levels(code.levels);
  if (code.value >> (3 * code.levels) != 0) throw std::out_of_range("morton_decode: code out of range");
  return morton_deinterleave(code.value);
}

Cell cell_of(const Vec3& p, int levels) {
  check_levels(levels);
  return {axis_cell(p.x, levels), axis_cell(p.y, levels), axis_cell(p.z, levels)};
}

Cell cell_of(const std::array<float, 3>& p, int levels) { return cell_of(Vec3{p[0], p[1], p[2]}, levels); }

}  // namespace fhv
