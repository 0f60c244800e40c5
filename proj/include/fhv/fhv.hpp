// Copyright 2026 The FHV Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fhv/morton.hpp"
#include "fhv/parallel.hpp"
#include "fhv/raster.hpp"
#include "fhv/scene.hpp"

namespace fhv {

inline constexpr std::int32_t kNoFragment = -1;
inline constexpr std::uint32_t kPackedRecordBytes = 36;
inline constexpr std::uint32_t kAlignedRecordBytes = 48;
inline constexpr double kDefaultDepthComplexity = 10.0;
inline constexpr int kDefaultLevels = 6;

struct FragmentRecord {
  std::array<float, 3> position{};  // normalized world units
  std::array<float, 3> normal{};
  std::uint32_t material_id = 0;
  std::uint32_t object_id = 0;
  std::int32_t prev_index = kNoFragment;

  friend bool operator==(const FragmentRecord&, const FragmentRecord&) = default;
};
static_assert(sizeof(FragmentRecord) == kPackedRecordBytes);

FragmentRecord make_record(const EmittedFragment& frag, std::int32_t prev_index = kNoFragment);

/// Pre-allocated global fragment list with an atomically advanced free
/// counter. The counter keeps advancing past capacity so the host can read the
/// capacity a complete capture would have needed.
class FragmentPool {
 public:
  FragmentPool() = default;
  explicit FragmentPool(std::uint32_t capacity);

  /// Thread-safe. Returns nullopt and raises the overflow flag once full.
  std::optional<std::uint32_t> allocate();

  std::uint32_t capacity() const { return static_cast<std::uint32_t>(records_.size()); }
  /// Number of stored records: min(requested, capacity).
  std::uint32_t size() const;
  /// Raw value of the next-free counter (allocation attempts so far).
  std::uint64_t requested() const { return next_free_; }
  bool overflowed() const { return overflowed_; }

  FragmentRecord& operator[](std::uint32_t i) { return records_[i]; }
  const FragmentRecord& operator[](std::uint32_t i) const { return records_[i]; }
  std::span<const FragmentRecord> records() const { return {records_.data(), size()}; }

  /// Sets the counter directly; used when a pool is filled by index (POFA)
  /// or restored from a snapshot.
  void set_stored(std::uint32_t count);

 private:
  std::vector<FragmentRecord> records_;
  std::uint64_t next_free_ = 0;
  bool overflowed_ = false;
};

/// FHV_PPFL head array: last inserted fragment per pixel, or -1.
struct PixelDirectory {
  int width = 0;
  int height = 0;
  std::vector<std::int32_t> heads;

  PixelDirectory() = default;
  PixelDirectory(int width, int height);
  std::int32_t head(int x, int y) const { return heads[static_cast<std::size_t>(y) * width + x]; }
};

/// 8-bit child-occupancy masks for octree levels 0 .. levels-1; level k holds
/// 8^k nodes and node m's children are 8m .. 8m+7 on level k+1 (the leaves
/// when k+1 == levels).
class OccupancyPyramid {
 public:
  OccupancyPyramid() = default;
  explicit OccupancyPyramid(int levels);

  int levels() const { return levels_; }
  std::uint8_t mask(int level, std::uint64_t node) const { return masks_[level][node]; }
  bool leaf_occupied(std::uint64_t leaf) const;
  /// Thread-safe; sets the child bits on the path from the root to `leaf`.
  void mark_leaf(std::uint64_t leaf);
  const std::vector<std::vector<std::uint8_t>>& raw() const { return masks_; }
  std::vector<std::vector<std::uint8_t>>& raw() { return masks_; }

  static OccupancyPyramid from_leaf_counts(int levels, std::span<const std::uint32_t> counts);

  friend bool operator==(const OccupancyPyramid&, const OccupancyPyramid&) = default;

 private:
  int levels_ = 0;
  std::vector<std::vector<std::uint8_t>> masks_;
};

/// FHV_POFL leaf directory: per-leaf chain heads in Morton order.
struct LeafHeads {
  int levels = 0;
  std::vector<std::int32_t> heads;

  LeafHeads() = default;
  explicit LeafHeads(int levels);
};

/// FHV_POFA leaf directory: per-leaf contiguous ranges in Morton order.
struct LeafRanges {
  int levels = 0;
  std::vector<std::uint32_t> offsets;
  std::vector<std::uint32_t> counts;

  LeafRanges() = default;
  explicit LeafRanges(int levels);
};

/// Offsets are the exclusive prefix sum of `counts` in Morton order.
LeafRanges ranges_from_counts(int levels, std::vector<std::uint32_t> counts);

struct FhvPpfl {
  PixelDirectory directory;
  FragmentPool pool;
  CaptureStats stats;
};

struct FhvPofl {
  int capture_resolution = 0;
  LeafHeads directory;
  OccupancyPyramid pyramid;
  FragmentPool pool;
  CaptureStats stats;

  int levels() const { return directory.levels; }
};

struct FhvPofa {
  int capture_resolution = 0;
  LeafRanges directory;
  OccupancyPyramid pyramid;
  FragmentPool pool;
  CaptureStats stats;

  int levels() const { return directory.levels; }
};

std::uint64_t leaf_count(int levels);

/// Thread-safe insertion; nullopt when the pool is full (fragment dropped).
std::optional<std::uint32_t> ppfl_insert(PixelDirectory& dir, FragmentPool& pool, const EmittedFragment& frag);
std::optional<std::uint32_t> pofl_insert(LeafHeads& dir, OccupancyPyramid& pyramid, FragmentPool& pool,
                                         const EmittedFragment& frag);

/// Pool size from resolution times an average depth complexity.
std::uint32_t default_capacity(int width, int height, double depth_complexity = kDefaultDepthComplexity);

FhvPpfl build_ppfl(const Scene& scene, Axis axis, int resolution, std::uint32_t capacity, Execution exec = {});
FhvPofl build_pofl(const Scene& scene, CaptureStrategy strategy, int resolution, int levels,
                   std::uint32_t capacity, Execution exec = {});
/// Two-pass build: count per leaf, prefix-sum into offsets, then re-capture
/// and scatter into exactly sized contiguous ranges. Throws if the two passes
/// disagree.
FhvPofa pofa_build(const Scene& scene, CaptureStrategy strategy, int resolution, int levels, Execution exec = {});

/// Re-packs every POFL chain into a contiguous range, oldest fragment first.
FhvPofa rebuild_pofl_as_pofa(const FhvPofl& pofl);

/// Visits the fragments of one leaf: POFL walks the chain (newest first),
/// POFA walks the contiguous range.
template <typename Fn>
void for_each_leaf_fragment(const FhvPofl& fhv, std::uint64_t leaf, Fn&& fn) {
  for (std::int32_t i = fhv.directory.heads[leaf]; i != kNoFragment; i = fhv.pool[static_cast<std::uint32_t>(i)].prev_index) {
    fn(static_cast<std::uint32_t>(i), fhv.pool[static_cast<std::uint32_t>(i)]);
  }
}

template <typename Fn>
void for_each_leaf_fragment(const FhvPofa& fhv, std::uint64_t leaf, Fn&& fn) {
  const std::uint32_t begin = fhv.directory.offsets[leaf];
  const std::uint32_t end = begin + fhv.directory.counts[leaf];
  for (std::uint32_t i = begin; i < end; ++i) fn(i, fhv.pool[i]);
}

enum class Layout { DeferredShading, Ppfl, Pofl, Pofa };

const char* to_string(Layout layout);
Layout parse_layout(const std::string& text);

struct MemoryParams {
  int width = 1000;  // capture resolution, or output resolution for DS
  int height = 1000;
  int levels = kDefaultLevels;
  std::uint32_t record_bytes = kAlignedRecordBytes;
  std::uint64_t fragments = 0;  // pool capacity (PPFL/POFL) or exact count (POFA)
  std::uint32_t gbuffer_bytes_per_pixel = 32;
};

struct MemoryReport {
  Layout layout = Layout::Pofa;
  std::uint64_t directory_bytes = 0;  // pixel array, G-buffer or leaf level
  std::uint64_t inner_node_bytes = 0;
  std::uint64_t pool_bytes = 0;

  std::uint64_t total_bytes() const { return directory_bytes + inner_node_bytes + pool_bytes; }
  double total_mib() const { return static_cast<double>(total_bytes()) / (1024.0 * 1024.0); }
};

/// Byte accounting: every octant costs 4 bytes (POFL) or the leaves cost 8
/// bytes and inner octants 4 (POFA), plus record_bytes per pool slot.
MemoryReport memory_report(Layout layout, const MemoryParams& params);

}  // namespace fhv
