// Copyright 2026 The FHV Authors
// SPDX-License-Identifier: Apache-2.0

#include "fhv/bundled_scenes.hpp"

#include <array>
#include <cmath>
#include <utility>

#include "fhv/error.hpp"

namespace fhv {
namespace {

std::uint32_t add_material(Scene& s, std::string name, Vec3 diffuse, double alpha = 1.0,
                           Vec3 specular = {0.0, 0.0, 0.0}, double shininess = 32.0) {
  Material m;
  m.name = std::move(name);
  m.diffuse = diffuse;
  m.specular = specular;
  m.shininess = shininess;
  m.alpha = alpha;
  s.materials.push_back(m);
  return static_cast<std::uint32_t>(s.materials.size() - 1);
}

std::uint32_t add_object(Scene& s, std::string name) {
  s.object_names.push_back(std::move(name));
  return static_cast<std::uint32_t>(s.object_names.size() - 1);
}

// Two triangles (a,b,c) and (a,c,d), wound so the face normal agrees with `facing`.
void add_quad(Scene& s, Vec3 a, Vec3 b, Vec3 c, Vec3 d, const Vec3& facing, std::uint32_t material,
              std::uint32_t object) {
  if (dot(cross(b - a, c - a), facing) < 0.0) std::swap(b, d);
  s.triangles.push_back(make_triangle(a, b, c, material, object));
  s.triangles.push_back(make_triangle(a, c, d, material, object));
}

// Axis-aligned closed box; `inward` flips every face toward the interior.
void add_box(Scene& s, const Vec3& lo, const Vec3& hi, bool inward, std::uint32_t material, std::uint32_t object,
             const std::array<std::uint32_t, 6>* per_face_material = nullptr,
             const std::array<std::uint32_t, 6>* per_face_object = nullptr) {
  const double sign = inward ? -1.0 : 1.0;
  auto face = [&](int index, Vec3 a, Vec3 b, Vec3 c, Vec3 d, Vec3 n) {
    const auto m = per_face_material ? (*per_face_material)[index] : material;
    const auto o = per_face_object ? (*per_face_object)[index] : object;
    add_quad(s, a, b, c, d, n * sign, m, o);
  };
  const double x0 = lo.x, y0 = lo.y, z0 = lo.z, x1 = hi.x, y1 = hi.y, z1 = hi.z;
  face(0, {x0, y0, z0}, {x0, y1, z0}, {x0, y1, z1}, {x0, y0, z1}, {-1, 0, 0});
  face(1, {x1, y0, z0}, {x1, y1, z0}, {x1, y1, z1}, {x1, y0, z1}, {1, 0, 0});
  face(2, {x0, y0, z0}, {x1, y0, z0}, {x1, y0, z1}, {x0, y0, z1}, {0, -1, 0});
  face(3, {x0, y1, z0}, {x1, y1, z0}, {x1, y1, z1}, {x0, y1, z1}, {0, 1, 0});
  face(4, {x0, y0, z0}, {x1, y0, z0}, {x1, y1, z0}, {x0, y1, z0}, {0, 0, -1});
  face(5, {x0, y0, z1}, {x1, y0, z1}, {x1, y1, z1}, {x0, y1, z1}, {0, 0, 1});
}

}  // namespace

Scene make_three_quads(double alpha) {
  Scene s;
  const auto red = add_material(s, "red", {1, 0, 0}, alpha);
  const auto green = add_material(s, "green", {0, 1, 0}, alpha);
  const auto blue = add_material(s, "blue", {0, 0, 1}, alpha);
  const Vec3 facing{0, 0, 1};
  auto quad = [&](double lo, double hi, double z, std::uint32_t material, const char* name) {
    const auto object = add_object(s, name);
    add_quad(s, {lo, lo, z}, {hi, lo, z}, {hi, hi, z}, {lo, hi, z}, facing, material, object);
  };
  quad(0.25, 0.75, 0.5, green, "green");
  quad(0.1, 0.6, 0.75, red, "red");
  quad(0.4, 0.9, 0.25, blue, "blue");
  s.recompute_bounds();
  return s;
}

Scene make_icosphere(int subdivisions) {
  if (subdivisions < 0 || subdivisions > 6) throw Error("make_icosphere: subdivisions must lie in [0, 6]");
  Scene s;
  const std::array<Vec3, 4> palette{Vec3{0.9, 0.3, 0.2}, Vec3{0.2, 0.7, 0.3}, Vec3{0.2, 0.4, 0.9},
                                    Vec3{0.9, 0.8, 0.3}};
  for (std::size_t i = 0; i < palette.size(); ++i) {
    add_material(s, "ico" + std::to_string(i), palette[i], 1.0, {0.3, 0.3, 0.3}, 24.0);
  }

  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> base = {{-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
                            {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
                            {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
  for (auto& v : base) v = normalize(v);
  const int faces[20][3] = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                            {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                            {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                            {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

  const Vec3 center{0.5, 0.5, 0.5};
  const double radius = 0.4;
  for (int f = 0; f < 20; ++f) {
    const auto object = add_object(s, "face" + std::to_string(f));
    const auto material = static_cast<std::uint32_t>(f % palette.size());
    std::vector<std::array<Vec3, 3>> tris{{base[faces[f][0]], base[faces[f][1]], base[faces[f][2]]}};
    for (int level = 0; level < subdivisions; ++level) {
      std::vector<std::array<Vec3, 3>> next;
      next.reserve(tris.size() * 4);
      for (const auto& t : tris) {
        const Vec3 a = normalize(t[0] + t[1]);
        const Vec3 b = normalize(t[1] + t[2]);
        const Vec3 c = normalize(t[2] + t[0]);
        next.push_back({t[0], a, c});
        next.push_back({t[1], b, a});
        next.push_back({t[2], c, b});
        next.push_back({a, b, c});
      }
      tris = std::move(next);
    }
    for (const auto& t : tris) {
      Triangle tri = make_triangle(center + t[0] * radius, center + t[1] * radius, center + t[2] * radius,
                                   material, object);
      tri.v0.normal = t[0];
      tri.v1.normal = t[1];
      tri.v2.normal = t[2];
      s.triangles.push_back(tri);
    }
  }
  s.recompute_bounds();
  return s;
}

Scene make_edge_on_plane() {
  Scene s;
  const auto m = add_material(s, "plane", {0.8, 0.8, 0.8});
  const auto o = add_object(s, "plane");
  add_quad(s, {0.5, 0.1, 0.1}, {0.5, 0.9, 0.1}, {0.5, 0.9, 0.9}, {0.5, 0.1, 0.9}, {1, 0, 0}, m, o);
  s.recompute_bounds();
  return s;
}

Scene make_cornell_box() {
  Scene s;
  const auto white = add_material(s, "white", {0.75, 0.75, 0.75});
  const auto red = add_material(s, "red", {0.75, 0.15, 0.12});
  const auto green = add_material(s, "green", {0.15, 0.7, 0.2});
  const auto block = add_material(s, "block", {0.7, 0.7, 0.6}, 1.0, {0.4, 0.4, 0.4}, 48.0);
  const auto glass = add_material(s, "glass", {0.5, 0.7, 0.9}, 0.5, {0.6, 0.6, 0.6}, 64.0);
  const auto window = add_material(s, "window", {0.9, 0.9, 0.95}, 0.2);

  std::array<std::uint32_t, 6> wall_objects{};
  const char* wall_names[6] = {"left", "right", "floor", "ceiling", "back", "front"};
  for (int i = 0; i < 6; ++i) wall_objects[i] = add_object(s, wall_names[i]);
  const std::array<std::uint32_t, 6> wall_materials{red, green, white, white, white, window};
  add_box(s, {0.1, 0.1, 0.1}, {0.9, 0.9, 0.9}, true, white, 0, &wall_materials, &wall_objects);

  add_box(s, {0.25, 0.1, 0.25}, {0.45, 0.6, 0.45}, false, block, add_object(s, "tall-block"));
  add_box(s, {0.55, 0.1, 0.5}, {0.75, 0.3, 0.7}, false, glass, add_object(s, "short-block"));
  s.recompute_bounds();
  return s;
}

std::vector<std::string> bundled_scene_names() {
  return {"three-quads", "icosphere", "edge-on-plane", "cornell-box"};
}

Scene bundled_scene(const std::string& name) {
  if (name == "three-quads") return make_three_quads();
  if (name == "icosphere") return make_icosphere();
  if (name == "edge-on-plane") return make_edge_on_plane();
  if (name == "cornell-box") return make_cornell_box();
  throw Error("unknown bundled scene '" + name + "'");
}

}  // namespace fhv
