// Copyright 2026 The FHV Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fhv/fhv.hpp"
#include "fhv/image.hpp"
#include "fhv/parallel.hpp"
#include "fhv/scene.hpp"
#include "fhv/shading.hpp"

namespace fhv {

struct GBuffer {
  int width = 0;
  int height = 0;
  std::vector<Vec3> position;
  std::vector<Vec3> normal;
  std::vector<std::uint32_t> material_id;
  std::vector<std::uint32_t> object_id;
  std::vector<double> depth;
  std::vector<std::uint8_t> valid;

  GBuffer() = default;
  GBuffer(int width, int height);
  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }
};

struct RenderOptions {
  Rgba background{0.0f, 0.0f, 0.0f, 0.0f};
  Execution exec;
};

/// Surface-to-viewer direction for a camera.
Vec3 to_viewer(const Camera& camera, const Vec3& position);

/// Material lookup that falls back to the default material for unknown ids.
const Material& material_or_default(std::span<const Material> materials, std::uint32_t id);

/// Geometry pass: rasterize with a depth test (ties keep the first triangle)
/// and keep the nearest surface attributes per pixel.
GBuffer deferred_geometry_pass(const Scene& scene, const Camera& camera, Execution exec = {});
/// Lighting pass: shade each valid G-buffer pixel once.
ImageBuffer deferred_lighting_pass(const GBuffer& gbuffer, std::span<const Material> materials, const Camera& camera,
                                   std::span<const Light> lights, const RenderOptions& options = {});

struct DeferredResult {
  ImageBuffer image;
  GBuffer gbuffer;
};

DeferredResult deferred_baseline(const Scene& scene, const Camera& camera, std::span<const Light> lights,
                                 const RenderOptions& options = {});

/// Splat side length in pixels for a fragment at clip-space w: the projected
/// world radius, but never less than one pixel.
double splat_size_pixels(const Camera& camera, double w, double splat_radius_world);

/// Point-splat reconstruction: each fragment becomes a screen-aligned square
/// splat; the nearest fragment per pixel wins (ties keep the earlier pool
/// index) and is shaded as opaque.
ImageBuffer splat_render(std::span<const FragmentRecord> fragments, std::span<const Material> materials,
                         const Camera& camera, std::span<const Light> lights, double splat_radius_world,
                         const RenderOptions& options = {});

}  // namespace fhv
