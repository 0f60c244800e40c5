// Copyright 2026 The FHV Authors
// SPDX-License-Identifier: Apache-2.0

#include "fhv/fhv.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>

#include "fhv/error.hpp"

namespace fhv {
namespace {

void check_octree_levels(int levels) {
  if (levels < 1 || levels > 10) throw Error("octree levels must lie in [1, 10]");
}

std::uint64_t leaf_of(const FragmentRecord& r, int levels) {
  const Cell c = cell_of(r.position, levels);
  return morton_interleave(c.x, c.y, c.z);
}

std::uint32_t checked_u32(std::uint64_t v, const char* what) {
  if (v > std::numeric_limits<std::int32_t>::max()) throw Error(std::string(what) + " exceeds the 32-bit index range");
  return static_cast<std::uint32_t>(v);
}

}  // namespace

FragmentRecord make_record(const EmittedFragment& frag, std::int32_t prev_index) {
  FragmentRecord r;
  r.position = {static_cast<float>(frag.world_position.x), static_cast<float>(frag.world_position.y),
                static_cast<float>(frag.world_position.z)};
  r.normal = {static_cast<float>(frag.world_normal.x), static_cast<float>(frag.world_normal.y),
              static_cast<float>(frag.world_normal.z)};
  r.material_id = frag.material_id;
  r.object_id = frag.object_id;
  r.prev_index = prev_index;
  return r;
}

FragmentPool::FragmentPool(std::uint32_t capacity) : records_(checked_u32(capacity, "pool capacity")) {}

std::optional<std::uint32_t> FragmentPool::allocate() {
  const std::uint64_t idx = std::atomic_ref<std::uint64_t>(next_free_).fetch_add(1, std::memory_order_relaxed);
  if (idx >= records_.size()) {
    std::atomic_ref<bool>(overflowed_).store(true, std::memory_order_relaxed);
    return std::nullopt;
  }
  return static_cast<std::uint32_t>(idx);
}

std::uint32_t FragmentPool::size() const {
  return static_cast<std::uint32_t>(std::min<std::uint64_t>(next_free_, records_.size()));
}

void FragmentPool::set_stored(std::uint32_t count) {
  if (count > records_.size()) throw Error("FragmentPool::set_stored: count exceeds capacity");
  next_free_ = count;
  overflowed_ = false;
}

PixelDirectory::PixelDirectory(int w, int h)
    : width(w), height(h), heads(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), kNoFragment) {
  if (w < 1 || h < 1) throw Error("PixelDirectory: resolution must be at least 1x1");
}

std::uint64_t leaf_count(int levels) { return std::uint64_t{1} << (3 * levels); }

OccupancyPyramid::OccupancyPyramid(int levels) : levels_(levels) {
  check_octree_levels(levels);
  masks_.resize(static_cast<std::size_t>(levels));
  for (int k = 0; k < levels; ++k) masks_[k].assign(leaf_count(k), 0);
}

bool OccupancyPyramid::leaf_occupied(std::uint64_t leaf) const {
  return (masks_[levels_ - 1][leaf >> 3] >> (leaf & 7)) & 1u;
}

void OccupancyPyramid::mark_leaf(std::uint64_t leaf) {
  std::uint64_t child = leaf;
  for (int k = levels_ - 1; k >= 0; --k) {
    const std::uint64_t node = child >> 3;
    const auto bit = static_cast<std::uint8_t>(1u << (child & 7));
    const std::uint8_t before = std::atomic_ref<std::uint8_t>(masks_[k][node]).fetch_or(bit, std::memory_order_relaxed);
    // Ancestors were (or are being) marked by whoever set this bit first.
    if (before & bit) return;
    child = node;
  }
}

OccupancyPyramid OccupancyPyramid::from_leaf_counts(int levels, std::span<const std::uint32_t> counts) {
  OccupancyPyramid p(levels);
  if (counts.size() != leaf_count(levels)) throw Error("from_leaf_counts: wrong number of leaves");
  for (std::uint64_t m = 0; m < counts.size(); ++m) {
    if (counts[m] != 0) p.mark_leaf(m);
  }
  return p;
}

LeafHeads::LeafHeads(int l) : levels(l) {
  check_octree_levels(l);
  heads.assign(leaf_count(l), kNoFragment);
}

LeafRanges::LeafRanges(int l) : levels(l) {
  check_octree_levels(l);
  offsets.assign(leaf_count(l), 0);
  counts.assign(leaf_count(l), 0);
}

LeafRanges ranges_from_counts(int levels, std::vector<std::uint32_t> counts) {
  if (counts.size() != leaf_count(levels)) throw Error("ranges_from_counts: wrong number of leaves");
  LeafRanges r;
  r.levels = levels;
  r.offsets.resize(counts.size());
  std::uint64_t total = 0;
  for (std::size_t m = 0; m < counts.size(); ++m) {
    r.offsets[m] = static_cast<std::uint32_t>(total);
    total += counts[m];
    checked_u32(total, "fragment count");
  }
  r.counts = std::move(counts);
  return r;
}

std::optional<std::uint32_t> ppfl_insert(PixelDirectory& dir, FragmentPool& pool, const EmittedFragment& frag) {
  if (frag.x < 0 || frag.y < 0 || frag.x >= dir.width || frag.y >= dir.height) {
    throw std::out_of_range("ppfl_insert: raster position outside the pixel directory");
  }
  const auto idx = pool.allocate();
  if (!idx) return std::nullopt;
  auto& head = dir.heads[static_cast<std::size_t>(frag.y) * dir.width + frag.x];
  const std::int32_t prev = std::atomic_ref<std::int32_t>(head).exchange(static_cast<std::int32_t>(*idx));
  pool[*idx] = make_record(frag, prev);
  return idx;
}

std::optional<std::uint32_t> pofl_insert(LeafHeads& dir, OccupancyPyramid& pyramid, FragmentPool& pool,
                                         const EmittedFragment& frag) {
  FragmentRecord record = make_record(frag);
  const std::uint64_t leaf = leaf_of(record, dir.levels);
  const auto idx = pool.allocate();
  if (!idx) return std::nullopt;
  record.prev_index = std::atomic_ref<std::int32_t>(dir.heads[leaf]).exchange(static_cast<std::int32_t>(*idx));
  pool[*idx] = record;
  pyramid.mark_leaf(leaf);
  return idx;
}

std::uint32_t default_capacity(int width, int height, double depth_complexity) {
  const double cap = std::ceil(static_cast<double>(width) * static_cast<double>(height) * depth_complexity);
  if (!(cap >= 0.0) || cap > std::numeric_limits<std::int32_t>::max()) {
    throw Error("default_capacity: capacity exceeds the 32-bit index range");
  }
  return static_cast<std::uint32_t>(cap);
}

FhvPpfl build_ppfl(const Scene& scene, Axis axis, int resolution, std::uint32_t capacity, Execution exec) {
  FhvPpfl fhv;
  fhv.directory = PixelDirectory(resolution, resolution);
  fhv.pool = FragmentPool(capacity);
  fhv.stats = capture_pass(scene, CaptureStrategy::one_view(axis), capture_config(resolution),
                           [&](const EmittedFragment& f) { ppfl_insert(fhv.directory, fhv.pool, f); }, exec);
  return fhv;
}

FhvPofl build_pofl(const Scene& scene, CaptureStrategy strategy, int resolution, int levels, std::uint32_t capacity,
                   Execution exec) {
  FhvPofl fhv;
  fhv.capture_resolution = resolution;
  fhv.directory = LeafHeads(levels);
  fhv.pyramid = OccupancyPyramid(levels);
  fhv.pool = FragmentPool(capacity);
  fhv.stats = capture_pass(scene, strategy, capture_config(resolution),
                           [&](const EmittedFragment& f) { pofl_insert(fhv.directory, fhv.pyramid, fhv.pool, f); },
                           exec);
  return fhv;
}

FhvPofa pofa_build(const Scene& scene, CaptureStrategy strategy, int resolution, int levels, Execution exec) {
  check_octree_levels(levels);
  const RasterConfig cfg = capture_config(resolution);

  // Pass 1: count fragments per leaf.
  std::vector<std::uint32_t> counters(leaf_count(levels), 0);
  capture_pass(scene, strategy, cfg, [&](const EmittedFragment& f) {
    const std::uint64_t leaf = leaf_of(make_record(f), levels);
    std::atomic_ref<std::uint32_t>(counters[leaf]).fetch_add(1, std::memory_order_relaxed);
  }, exec);

  FhvPofa fhv;
  fhv.capture_resolution = resolution;
  fhv.directory = ranges_from_counts(levels, counters);
  fhv.pyramid = OccupancyPyramid::from_leaf_counts(levels, fhv.directory.counts);
  const std::uint64_t total = fhv.directory.counts.empty()
                                  ? 0
                                  : std::uint64_t{fhv.directory.offsets.back()} + fhv.directory.counts.back();
  fhv.pool = FragmentPool(static_cast<std::uint32_t>(total));

  // Pass 2: the same counters, reset, become per-leaf write cursors.
  std::fill(counters.begin(), counters.end(), 0);
  std::atomic<bool> mismatch{false};
  fhv.stats = capture_pass(scene, strategy, cfg, [&](const EmittedFragment& f) {
    const FragmentRecord record = make_record(f);
    const std::uint64_t leaf = leaf_of(record, levels);
    const std::uint32_t slot = std::atomic_ref<std::uint32_t>(counters[leaf]).fetch_add(1, std::memory_order_relaxed);
    if (slot >= fhv.directory.counts[leaf]) {
      mismatch = true;
      return;
    }
    fhv.pool[fhv.directory.offsets[leaf] + slot] = record;
  }, exec);

  if (mismatch || counters != fhv.directory.counts) {
    throw Error("pofa_build: second capture pass disagrees with the counting pass");
  }
  fhv.pool.set_stored(static_cast<std::uint32_t>(total));
  return fhv;
}

FhvPofa rebuild_pofl_as_pofa(const FhvPofl& pofl) {
  const int levels = pofl.levels();
  std::vector<std::uint32_t> counts(leaf_count(levels), 0);
  for (std::uint64_t m = 0; m < counts.size(); ++m) {
    for_each_leaf_fragment(pofl, m, [&](std::uint32_t, const FragmentRecord&) { ++counts[m]; });
  }
  FhvPofa fhv;
  fhv.capture_resolution = pofl.capture_resolution;
  fhv.stats = pofl.stats;
  fhv.directory = ranges_from_counts(levels, std::move(counts));
  fhv.pyramid = OccupancyPyramid::from_leaf_counts(levels, fhv.directory.counts);
  const std::uint32_t total = pofl.pool.size();
  fhv.pool = FragmentPool(total);
  for (std::uint64_t m = 0; m < fhv.directory.counts.size(); ++m) {
    // Chains run newest first; write back to front so ranges hold emission order.
    std::uint32_t slot = fhv.directory.offsets[m] + fhv.directory.counts[m];
    for_each_leaf_fragment(pofl, m, [&](std::uint32_t, const FragmentRecord& r) {
      FragmentRecord copy = r;
      copy.prev_index = kNoFragment;
      fhv.pool[--slot] = copy;
    });
  }
  fhv.pool.set_stored(total);
  return fhv;
}

const char* to_string(Layout layout) {
  switch (layout) {
    case Layout::DeferredShading: return "DS";
    case Layout::Ppfl: return "PPFL";
    case Layout::Pofl: return "POFL";
    case Layout::Pofa: return "POFA";
  }
  return "?";
}

Layout parse_layout(const std::string& text) {
  std::string s;
  for (char c : text) s += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (s == "DS") return Layout::DeferredShading;
  if (s == "PPFL") return Layout::Ppfl;
  if (s == "POFL") return Layout::Pofl;
  if (s == "POFA") return Layout::Pofa;
  throw Error("unknown layout '" + text + "'");
}

MemoryReport memory_report(Layout layout, const MemoryParams& p) {
  const std::uint64_t pixels = static_cast<std::uint64_t>(p.width) * static_cast<std::uint64_t>(p.height);
  std::uint64_t inner_octants = 0;
  for (int k = 0; k < p.levels; ++k) inner_octants += leaf_count(k);
  const std::uint64_t leaves = leaf_count(p.levels);

  MemoryReport r;
  r.layout = layout;
  switch (layout) {
    case Layout::DeferredShading:
      r.directory_bytes = pixels * p.gbuffer_bytes_per_pixel;
      break;
    case Layout::Ppfl:
      r.directory_bytes = 4 * pixels;
      r.pool_bytes = std::uint64_t{p.record_bytes} * p.fragments;
      break;
    case Layout::Pofl:
      r.directory_bytes = 4 * leaves;
      r.inner_node_bytes = 4 * inner_octants;
      r.pool_bytes = std::uint64_t{p.record_bytes} * p.fragments;
      break;
    case Layout::Pofa:
      r.directory_bytes = 8 * leaves;
      r.inner_node_bytes = 4 * inner_octants;
      r.pool_bytes = std::uint64_t{p.record_bytes} * p.fragments;
      break;
  }
  return r;
}

}  // namespace fhv
