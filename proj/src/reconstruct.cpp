// Copyright 2026 The FHV Authors
// SPDX-License-Identifier: Apache-2.0

#include "fhv/reconstruct.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "fhv/error.hpp"
#include "fhv/raster.hpp"

namespace fhv {
namespace {

const Material kDefaultMaterial{};

Rgba to_rgba(const Vec3& c, double alpha) {
  return {static_cast<float>(c.x), static_cast<float>(c.y), static_cast<float>(c.z), static_cast<float>(alpha)};
}

Vec3 to_vec3(const std::array<float, 3>& a) { return {a[0], a[1], a[2]}; }

}  // namespace

GBuffer::GBuffer(int w, int h)
    : width(w),
      height(h),
      position(static_cast<std::size_t>(w) * h),
      normal(static_cast<std::size_t>(w) * h),
      material_id(static_cast<std::size_t>(w) * h, 0),
      object_id(static_cast<std::size_t>(w) * h, 0),
      depth(static_cast<std::size_t>(w) * h, std::numeric_limits<double>::infinity()),
      valid(static_cast<std::size_t>(w) * h, 0) {}

Vec3 to_viewer(const Camera& camera, const Vec3& position) {
  if (camera.kind == Projection::Orthographic) return -camera.view_dir;
  return normalize(camera.eye - position);
}

const Material& material_or_default(std::span<const Material> materials, std::uint32_t id) {
  return id < materials.size() ? materials[id] : kDefaultMaterial;
}

GBuffer deferred_geometry_pass(const Scene& scene, const Camera& camera, Execution exec) {
  GBuffer g(camera.width, camera.height);
  const RasterConfig cfg = RasterConfig::from_camera(camera);
  // Row bands are owned by one worker each, so the result does not depend on
  // the thread count.
  parallel_chunks(static_cast<std::size_t>(camera.height), exec, [&](std::size_t y0, std::size_t y1, std::size_t) {
    const PixelRect band{0, static_cast<int>(y0), camera.width, static_cast<int>(y1)};
    for (const auto& tri : scene.triangles) {
      rasterize_triangle(tri, cfg, [&](const EmittedFragment& f) {
        if (f.depth < 0.0 || f.depth > 1.0) return;
        const std::size_t i = g.index(f.x, f.y);
        if (!(f.depth < g.depth[i])) return;
        g.depth[i] = f.depth;
        g.position[i] = f.world_position;
        g.normal[i] = f.world_normal;
        g.material_id[i] = f.material_id;
        g.object_id[i] = f.object_id;
        g.valid[i] = 1;
      }, band);
    }
  });
  return g;
}

ImageBuffer deferred_lighting_pass(const GBuffer& g, std::span<const Material> materials, const Camera& camera,
                                   std::span<const Light> lights, const RenderOptions& options) {
  ImageBuffer image(g.width, g.height, options.background);
  parallel_chunks(image.pixels.size(), options.exec, [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t i = begin; i < end; ++i) {
      if (!g.valid[i]) continue;
      const Vec3 c = shade(g.position[i], g.normal[i], material_or_default(materials, g.material_id[i]), lights,
                           to_viewer(camera, g.position[i]));
      image.pixels[i] = to_rgba(c, 1.0);
      image.depth[i] = g.depth[i];
      image.object_ids[i] = static_cast<std::int32_t>(g.object_id[i]);
    }
  });
  return image;
}

DeferredResult deferred_baseline(const Scene& scene, const Camera& camera, std::span<const Light> lights,
                                 const RenderOptions& options) {
  DeferredResult r;
  r.gbuffer = deferred_geometry_pass(scene, camera, options.exec);
  r.image = deferred_lighting_pass(r.gbuffer, scene.materials, camera, lights, options);
  return r;
}

double splat_size_pixels(const Camera& camera, double w, double splat_radius_world) {
  double pixel_world = 0.0;
  if (camera.kind == Projection::Orthographic) {
    pixel_world = camera.extent_or_fov / camera.height;
  } else {
    pixel_world = 2.0 * w * std::tan(0.5 * camera.extent_or_fov * std::numbers::pi / 180.0) / camera.height;
  }
  return std::max(1.0, splat_radius_world / pixel_world);
}

ImageBuffer splat_render(std::span<const FragmentRecord> fragments, std::span<const Material> materials,
                         const Camera& camera, std::span<const Light> lights, double splat_radius_world,
                         const RenderOptions& options) {
  if (!(splat_radius_world > 0.0)) throw Error("splat_render: splat radius must be positive");
  const int width = camera.width;
  const int height = camera.height;
  const std::size_t pixel_count = static_cast<std::size_t>(width) * height;
  const Mat4 vp = camera.view_projection();
  constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

  struct Winner {
    std::vector<double> depth;
    std::vector<std::uint32_t> fragment;
  };
  const std::size_t chunks = chunk_count(fragments.size(), options.exec);
  std::vector<Winner> partial(chunks);

  parallel_chunks(fragments.size(), options.exec, [&](std::size_t begin, std::size_t end, std::size_t chunk) {
    Winner& win = partial[chunk];
    win.depth.assign(pixel_count, std::numeric_limits<double>::infinity());
    win.fragment.assign(pixel_count, kNone);
    for (std::size_t i = begin; i < end; ++i) {
      const Vec3 p = to_vec3(fragments[i].position);
      double w = 1.0;
      const Vec3 clip = vp.transform_point(p, w);
      if (!(w > 0.0)) continue;
      const double depth = clip.z / w;
      if (depth < 0.0 || depth > 1.0) continue;
      const double sx = (clip.x / w + 1.0) * 0.5 * width;
      const double sy = (1.0 - clip.y / w) * 0.5 * height;
      const double half = 0.5 * splat_size_pixels(camera, w, splat_radius_world);
      // Pixels whose centers fall in [s - half, s + half).
      const int x0 = std::max(0, static_cast<int>(std::ceil(sx - half - 0.5)));
      const int x1 = std::min(width, static_cast<int>(std::ceil(sx + half - 0.5)));
      const int y0 = std::max(0, static_cast<int>(std::ceil(sy - half - 0.5)));
      const int y1 = std::min(height, static_cast<int>(std::ceil(sy + half - 0.5)));
      for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
          const std::size_t k = static_cast<std::size_t>(y) * width + x;
          if (depth < win.depth[k]) {
            win.depth[k] = depth;
            win.fragment[k] = static_cast<std::uint32_t>(i);
          }
        }
      }
    }
  });

  // Chunks cover increasing index ranges, so an in-order strict merge keeps
  // the earliest fragment on ties, exactly as a sequential pass would.
  Winner merged;
  merged.depth.assign(pixel_count, std::numeric_limits<double>::infinity());
  merged.fragment.assign(pixel_count, kNone);
  for (const auto& win : partial) {
    if (win.depth.empty()) continue;
    for (std::size_t k = 0; k < pixel_count; ++k) {
      if (win.depth[k] < merged.depth[k]) {
        merged.depth[k] = win.depth[k];
        merged.fragment[k] = win.fragment[k];
      }
    }
  }

  ImageBuffer image(width, height, options.background);
  parallel_chunks(pixel_count, options.exec, [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t k = begin; k < end; ++k) {
      if (merged.fragment[k] == kNone) continue;
      const FragmentRecord& r = fragments[merged.fragment[k]];
      const Vec3 p = to_vec3(r.position);
      const Vec3 c = shade(p, to_vec3(r.normal), material_or_default(materials, r.material_id), lights,
                           to_viewer(camera, p));
      image.pixels[k] = to_rgba(c, 1.0);
      image.depth[k] = merged.depth[k];
      image.object_ids[k] = static_cast<std::int32_t>(r.object_id);
    }
  });
  return image;
}

}  // namespace fhv
