// Copyright 2026 The FHV Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fhv/math.hpp"

namespace fhv {

struct Vertex {
  Vec3 position;
  Vec3 normal;  // unit length
};

struct Triangle {
  Vertex v0, v1, v2;
  std::uint32_t material_id = 0;
  std::uint32_t object_id = 0;
  Vec3 face_normal;  // zero for degenerate triangles

  const Vertex& vertex(int i) const { return i == 0 ? v0 : (i == 1 ? v1 : v2); }
  double area() const { return 0.5 * length(cross(v1.position - v0.position, v2.position - v0.position)); }
  double perimeter() const {
    return length(v1.position - v0.position) + length(v2.position - v1.position) +
           length(v0.position - v2.position);
  }
  bool degenerate() const { return face_normal == Vec3{}; }
};

/// Builds a triangle and derives its face normal from the winding.
Triangle make_triangle(const Vec3& p0, const Vec3& p1, const Vec3& p2, std::uint32_t material_id,
                       std::uint32_t object_id);

struct Material {
  std::string name = "default";
  Vec3 diffuse{0.8, 0.8, 0.8};
  Vec3 specular{0.0, 0.0, 0.0};
  double shininess = 32.0;
  double alpha = 1.0;
};

struct Scene {
  std::vector<Triangle> triangles;
  std::vector<Material> materials;
  std::vector<std::string> object_names;
  Aabb bounds;

  std::uint32_t object_count() const;
  void recompute_bounds();
};

/// p' = scale * p + translation.
struct AffineMap {
  double scale = 1.0;
  Vec3 translation;

  Vec3 apply(const Vec3& p) const { return p * scale + translation; }
  Vec3 inverse(const Vec3& p) const { return (p - translation) * (1.0 / scale); }
};

/// Reads the OBJ subset (v, vn, f, g/o, usemtl). Materials named by `usemtl`
/// are looked up in the optional sidecar table; unknown names get defaults.
Scene load_scene(const std::filesystem::path& path,
                 const std::optional<std::filesystem::path>& material_table = std::nullopt);

/// Same as load_scene but parses in-memory text; `source` labels errors.
Scene parse_scene(const std::string& obj_text, const std::vector<Material>& material_table = {},
                  const std::string& source = "<scene>");

/// One record per line: name dr dg db sr sg sb shininess alpha.
std::vector<Material> parse_material_table(const std::string& text, const std::string& source = "<materials>");
std::vector<Material> load_material_table(const std::filesystem::path& path);

/// Uniformly scales and translates the scene so its bounds are centered in
/// [margin, 1 - margin]^3 with the longest axis spanning that interval.
std::pair<Scene, AffineMap> normalize_scene(const Scene& scene, double margin);

enum class Axis { X = 0, Y = 1, Z = 2 };

const char* to_string(Axis axis);

enum class Projection { Orthographic, Perspective };

/// Raster origin is the top-left corner; `extent_or_fov` is the window height
/// in world units (orthographic) or the vertical field of view in degrees.
struct Camera {
  Projection kind = Projection::Orthographic;
  Vec3 eye{0.5, 0.5, 0.5};
  Vec3 view_dir{0.0, 0.0, -1.0};
  Vec3 up{0.0, 1.0, 0.0};
  double extent_or_fov = 1.0;
  int width = 1;
  int height = 1;
  double near = -1.0;
  double far = 1.0;

  /// Orthonormalizes view_dir/up and validates the remaining invariants.
  static Camera make(Projection kind, const Vec3& eye, const Vec3& view_dir, const Vec3& up,
                     double extent_or_fov, int width, int height, double near, double far);

  Vec3 right() const { return cross(view_dir, up); }
  double aspect() const { return static_cast<double>(width) / static_cast<double>(height); }
  /// World -> clip transform; NDC x,y in [-1,1], z in [0,1].
  Mat4 view_projection() const;
  /// Raster-space position (pixels, y down) and NDC depth. Returns false when
  /// the point is behind a perspective eye.
  bool project(const Vec3& p, double& sx, double& sy, double& depth) const;
};

/// Orthographic camera at the cube center looking down the negative `axis`
/// direction, covering the whole normalized cube with no near/far clipping.
Camera capture_camera(const Scene& scene, Axis axis, int resolution);

}  // namespace fhv
