// Copyright 2026 The FHV Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>

#include "fhv/math.hpp"
#include "fhv/parallel.hpp"
#include "fhv/scene.hpp"

namespace fhv {

/// Vertices are snapped to 1/256 pixel before edge evaluation, so coverage is
/// decided with exact integer arithmetic.
inline constexpr int kSubpixelBits = 8;

struct RasterConfig {
  int width = 1;
  int height = 1;
  Mat4 projection = Mat4::identity();  // world -> clip, NDC depth in [0,1]

  static RasterConfig from_camera(const Camera& camera);
};

/// Half-open pixel rectangle.
struct PixelRect {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;
};

struct EmittedFragment {
  int x = 0;  // raster position; window-local for normal-space capture
  int y = 0;
  Vec3 world_position;
  Vec3 world_normal;
  double depth = 0.0;
  std::uint32_t material_id = 0;
  std::uint32_t object_id = 0;
};

/// Must tolerate concurrent calls when capture runs with more than one thread.
using FragmentSink = std::function<void(const EmittedFragment&)>;

/// Emits one fragment per covered pixel center (top-left tie rule) with
/// perspective-correct world position and renormalized normal. No culling,
/// no depth test. Triangles with a vertex behind a perspective eye are
/// skipped. Returns the number of emitted fragments.
std::size_t rasterize_triangle(const Triangle& tri, const RasterConfig& cfg, const FragmentSink& sink,
                               const std::optional<PixelRect>& scissor = std::nullopt);

/// Rows: tangent, bitangent, normal. Right-handed and deterministic.
std::array<Vec3, 3> tangent_basis(const Vec3& n);

struct CaptureStrategy {
  enum class Kind { OneView, ThreeSeparate, ThreeWayGeometry, NormalSpace };

  Kind kind = Kind::NormalSpace;
  Axis axis = Axis::Z;  // OneView only

  static CaptureStrategy one_view(Axis axis) { return {Kind::OneView, axis}; }
  static CaptureStrategy three_separate() { return {Kind::ThreeSeparate, Axis::Z}; }
  static CaptureStrategy three_way_geometry() { return {Kind::ThreeWayGeometry, Axis::Z}; }
  static CaptureStrategy normal_space() { return {Kind::NormalSpace, Axis::Z}; }
};

const char* to_string(CaptureStrategy::Kind kind);
/// Accepts "one-view", "three-separate", "three-way", "normal" (and Table-2
/// style aliases such as "1-pass/view").
CaptureStrategy parse_strategy(const std::string& text);

struct CaptureStats {
  std::uint64_t fragments_emitted = 0;
  std::uint64_t triangles_processed = 0;  // triangle rasterizations performed
  std::uint32_t passes = 1;
  std::uint32_t draw_batches = 0;  // one per object per pass
};

/// Square orthographic capture setup looking down -z over the unit cube.
RasterConfig capture_config(int resolution);

/// Rasterizes the normalized scene under `strategy`. `cfg` supplies the
/// capture resolution and, through its footprint, the normal-space pixel
/// pitch. Sequential execution emits in canonical order; parallel execution
/// emits the same multiset.
CaptureStats capture_pass(const Scene& scene, CaptureStrategy strategy, const RasterConfig& cfg,
                          const FragmentSink& sink, Execution exec = {});

/// World units per pixel of an orthographic configuration.
double world_pixel_footprint(const RasterConfig& cfg);

}  // namespace fhv
