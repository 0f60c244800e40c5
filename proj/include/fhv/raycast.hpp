// Copyright 2026 The FHV Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>

#include "fhv/fhv.hpp"
#include "fhv/image.hpp"
#include "fhv/parallel.hpp"
#include "fhv/scene.hpp"
#include "fhv/shading.hpp"

namespace fhv {

struct Ray {
  Vec3 origin;
  Vec3 direction;  // unit
  double t_min = 0.0;
  double t_max = std::numeric_limits<double>::infinity();

  Vec3 at(double t) const { return origin + direction * t; }
};

struct HitRecord {
  double t = 0.0;
  std::uint32_t fragment = 0;
  std::uint64_t leaf = 0;
};

enum class RaycastMode { OpaqueNearest, Transparency, TransparencyShadows };

const char* to_string(RaycastMode mode);
/// Accepts "opaque"/"R", "transparency"/"R/T", "shadows"/"R/T/S".
RaycastMode parse_raycast_mode(const std::string& text);

inline constexpr double kCutoffDisabled = std::numeric_limits<double>::infinity();

struct RaycastConfig {
  double splat_radius_world = 0.0;
  /// Traversal stops once accumulated alpha reaches this value; values above
  /// 1 disable early termination.
  double alpha_cutoff = 1.0;
  RaycastMode mode = RaycastMode::Transparency;
  /// Shadow-ray start offset; 0 selects twice the splat radius.
  double shadow_epsilon = 0.0;
  Rgba background{0.0f, 0.0f, 0.0f, 0.0f};
};

struct RaycastStats {
  std::uint64_t rays = 0;
  std::uint64_t visited_leaves = 0;
  std::uint64_t tested_fragments = 0;
  std::uint64_t hits = 0;
  std::uint64_t terminated_early = 0;

  RaycastStats& operator+=(const RaycastStats& o);
};

/// Capture footprint / sqrt(2), capped at half the leaf edge so per-leaf
/// sorted hit lists concatenate into a globally sorted list.
double default_raycast_radius(double capture_footprint, int levels);

/// Perspective: from the eye through the pixel center. Orthographic: from the
/// near plane along the view direction, with t spanning near..far.
Ray gen_primary_ray(const Camera& camera, int px, int py);

/// Slab test against an axis-aligned box, clipped to [t_min, t_max].
bool intersect_box(const Ray& ray, const Vec3& lo, const Vec3& hi, double& t_enter, double& t_exit);

/// Return false to stop the traversal.
using LeafVisitor = std::function<bool(std::uint64_t leaf, double t_enter, double t_exit)>;

/// Front-to-back traversal of the occupied leaves the ray crosses. Children
/// are visited in order of entry distance and empty subtrees are skipped.
/// Returns the number of leaves handed to the visitor.
std::size_t traverse_octree(const OccupancyPyramid& pyramid, const Ray& ray, const LeafVisitor& visitor);

/// t of the fragment's projection onto the ray, if that lies in [t_min, t_max]
/// and the point is within `radius` of the ray.
std::optional<double> intersect_fragment(const Ray& ray, const FragmentRecord& fragment, double radius);

struct PixelSample {
  Rgba color{0.0f, 0.0f, 0.0f, 0.0f};
  std::int32_t object_id = -1;  // first contributing fragment
  double depth = std::numeric_limits<double>::infinity();  // its ray parameter
};

PixelSample raycast_pixel(const FhvPofl& fhv, std::span<const Material> materials, const Ray& ray,
                          std::span<const Light> lights, const RaycastConfig& cfg, RaycastStats* stats = nullptr);
PixelSample raycast_pixel(const FhvPofa& fhv, std::span<const Material> materials, const Ray& ray,
                          std::span<const Light> lights, const RaycastConfig& cfg, RaycastStats* stats = nullptr);

/// Fragments matching both ids are ignored by the shadow ray.
struct ShadowOrigin {
  std::uint32_t object_id = 0;
  std::uint64_t leaf = 0;
};

/// Product of (1 - alpha) over fragments hit between `point` (offset toward
/// the light) and the light.
double shadow_transmittance(const FhvPofl& fhv, std::span<const Material> materials, const Vec3& point,
                            const Light& light, const RaycastConfig& cfg,
                            const std::optional<ShadowOrigin>& origin = std::nullopt);
double shadow_transmittance(const FhvPofa& fhv, std::span<const Material> materials, const Vec3& point,
                            const Light& light, const RaycastConfig& cfg,
                            const std::optional<ShadowOrigin>& origin = std::nullopt);

ImageBuffer raycast_render(const FhvPofl& fhv, std::span<const Material> materials, const Camera& camera,
                           std::span<const Light> lights, const RaycastConfig& cfg, Execution exec = {},
                           RaycastStats* stats = nullptr);
ImageBuffer raycast_render(const FhvPofa& fhv, std::span<const Material> materials, const Camera& camera,
                           std::span<const Light> lights, const RaycastConfig& cfg, Execution exec = {},
                           RaycastStats* stats = nullptr);

}  // namespace fhv
