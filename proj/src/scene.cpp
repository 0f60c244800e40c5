// Copyright 2026 The FHV Authors
// SPDX-License-Identifier: Apache-2.0

#include "fhv/scene.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string_view>
#include <unordered_map>

#include "fhv/error.hpp"

namespace fhv {

Triangle make_triangle(const Vec3& p0, const Vec3& p1, const Vec3& p2, std::uint32_t material_id,
                       std::uint32_t object_id) {
  Triangle t;
  t.face_normal = normalize(cross(p1 - p0, p2 - p0));
  const Vec3 n = t.degenerate() ? Vec3{0.0, 0.0, 1.0} : t.face_normal;
  t.v0 = {p0, n};
  t.v1 = {p1, n};
  t.v2 = {p2, n};
  t.material_id = material_id;
  t.object_id = object_id;
  return t;
}

std::uint32_t Scene::object_count() const {
  std::uint32_t n = static_cast<std::uint32_t>(object_names.size());
  for (const auto& t : triangles) n = std::max(n, t.object_id + 1);
  return n;
}

void Scene::recompute_bounds() {
  if (triangles.empty()) {
    bounds = {};
    return;
  }
  constexpr double inf = std::numeric_limits<double>::infinity();
  Aabb b{{inf, inf, inf}, {-inf, -inf, -inf}};
  for (const auto& t : triangles) {
    for (int i = 0; i < 3; ++i) {
      b.min = min(b.min, t.vertex(i).position);
      b.max = max(b.max, t.vertex(i).position);
    }
  }
  bounds = b;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(ws);
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

double parse_real(std::string_view token, const std::string& source, std::size_t line) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError(source, line, "malformed number '" + std::string(token) + "'");
  }
  if (!std::isfinite(value)) {
    throw ParseError(source, line, "non-finite value '" + std::string(token) + "'");
  }
  return value;
}

long parse_index(std::string_view token, const std::string& source, std::size_t line) {
  long value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || value == 0) {
    throw ParseError(source, line, "malformed index '" + std::string(token) + "'");
  }
  return value;
}

// OBJ indices are 1-based; negative values count back from the end.
std::size_t resolve_index(long index, std::size_t count, const std::string& source, std::size_t line) {
  const long resolved = index > 0 ? index - 1 : static_cast<long>(count) + index;
  if (resolved < 0 || static_cast<std::size_t>(resolved) >= count) {
    throw ParseError(source, line, "index " + std::to_string(index) + " out of range");
  }
  return static_cast<std::size_t>(resolved);
}

Vec3 parse_vec3(const std::vector<std::string_view>& tokens, const std::string& source, std::size_t line) {
  if (tokens.size() < 4) throw ParseError(source, line, "expected three coordinates");
  return {parse_real(tokens[1], source, line), parse_real(tokens[2], source, line),
          parse_real(tokens[3], source, line)};
}

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

}  // namespace

std::vector<Material> parse_material_table(const std::string& text, const std::string& source) {
  std::vector<Material> out;
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto content = trim(std::string_view(raw).substr(0, raw.find('#')));
    if (content.empty()) continue;
    const auto tok = split_ws(content);
    if (tok.size() != 9) throw ParseError(source, line, "expected: name dr dg db sr sg sb shininess alpha");
    Material m;
    m.name = std::string(tok[0]);
    double v[8];
    for (int i = 0; i < 8; ++i) v[i] = parse_real(tok[i + 1], source, line);
    m.diffuse = {v[0], v[1], v[2]};
    m.specular = {v[3], v[4], v[5]};
    m.shininess = v[6];
    m.alpha = v[7];
    for (int i = 0; i < 6; ++i) {
      if (!in_unit(v[i])) throw ParseError(source, line, "color channel outside [0,1]");
    }
    if (!(m.shininess > 0.0)) throw ParseError(source, line, "shininess must be positive");
    if (!in_unit(m.alpha)) throw ParseError(source, line, "alpha outside [0,1]");
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<Material> load_material_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open material table " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_material_table(ss.str(), path.string());
}

Scene parse_scene(const std::string& obj_text, const std::vector<Material>& material_table,
                  const std::string& source) {
  Scene scene;
  std::vector<Vec3> positions;
  std::vector<Vec3> normals;
  std::unordered_map<std::string, std::uint32_t> material_ids;
  std::unordered_map<std::string, std::uint32_t> object_ids;

  auto material_for = [&](const std::string& name) {
    if (auto it = material_ids.find(name); it != material_ids.end()) return it->second;
    Material m;
    m.name = name;
    for (const auto& entry : material_table) {
      if (entry.name == name) m = entry;
    }
    const auto id = static_cast<std::uint32_t>(scene.materials.size());
    scene.materials.push_back(m);
    material_ids.emplace(name, id);
    return id;
  };
  auto object_for = [&](const std::string& name) {
    if (auto it = object_ids.find(name); it != object_ids.end()) return it->second;
    const auto id = static_cast<std::uint32_t>(scene.object_names.size());
    scene.object_names.push_back(name);
    object_ids.emplace(name, id);
    return id;
  };

  std::string current_material = "default";
  std::string current_object = "default";

  std::istringstream in(obj_text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto content = trim(std::string_view(raw).substr(0, raw.find('#')));
    if (content.empty()) continue;
    const auto tok = split_ws(content);
    const auto key = tok[0];
    if (key == "v") {
      positions.push_back(parse_vec3(tok, source, line));
    } else if (key == "vn") {
      normals.push_back(parse_vec3(tok, source, line));
    } else if (key == "g" || key == "o") {
      current_object = tok.size() > 1 ? std::string(tok[1]) : "default";
    } else if (key == "usemtl") {
      if (tok.size() < 2) throw ParseError(source, line, "usemtl without a name");
      current_material = std::string(tok[1]);
    } else if (key == "f") {
      if (tok.size() < 4) throw ParseError(source, line, "face needs at least 3 vertices");
      struct Corner {
        Vec3 position;
        std::optional<Vec3> normal;
      };
      std::vector<Corner> corners;
      for (std::size_t i = 1; i < tok.size(); ++i) {
        const auto t = tok[i];
        const auto s1 = t.find('/');
        Corner c;
        c.position = positions[resolve_index(parse_index(t.substr(0, s1), source, line), positions.size(),
                                             source, line)];
        if (s1 != std::string_view::npos) {
          const auto s2 = t.find('/', s1 + 1);
          if (s2 != std::string_view::npos && s2 + 1 < t.size()) {
            const auto n = normals[resolve_index(parse_index(t.substr(s2 + 1), source, line),
                                                 normals.size(), source, line)];
            if (length(n) > 0.0) c.normal = normalize(n);
          }
        }
        corners.push_back(c);
      }
      const auto material_id = material_for(current_material);
      const auto object_id = object_for(current_object);
      for (std::size_t i = 1; i + 1 < corners.size(); ++i) {
        Triangle tri = make_triangle(corners[0].position, corners[i].position, corners[i + 1].position,
                                     material_id, object_id);
        if (corners[0].normal) tri.v0.normal = *corners[0].normal;
        if (corners[i].normal) tri.v1.normal = *corners[i].normal;
        if (corners[i + 1].normal) tri.v2.normal = *corners[i + 1].normal;
        scene.triangles.push_back(tri);
      }
    }
    // vt, s, mtllib and other keywords carry nothing this loader uses.
  }
  if (scene.triangles.empty()) throw Error(source + ": scene contains no faces");
  scene.recompute_bounds();
  return scene;
}

Scene load_scene(const std::filesystem::path& path, const std::optional<std::filesystem::path>& material_table) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open scene " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  const auto table = material_table ? load_material_table(*material_table) : std::vector<Material>{};
  return parse_scene(ss.str(), table, path.string());
}

std::pair<Scene, AffineMap> normalize_scene(const Scene& scene, double margin) {
  if (scene.triangles.empty()) throw Error("normalize_scene: empty scene");
  if (!(margin >= 0.0 && margin < 0.25)) throw Error("normalize_scene: margin must lie in [0, 0.25)");
  const Vec3 extent = scene.bounds.extent();
  const double longest = std::max({extent.x, extent.y, extent.z});
  if (!(longest > 0.0)) throw Error("normalize_scene: degenerate bounds");

  AffineMap map;
  map.scale = (1.0 - 2.0 * margin) / longest;
  map.translation = Vec3{0.5, 0.5, 0.5} - scene.bounds.center() * map.scale;

  Scene out = scene;
  for (auto& t : out.triangles) {
    t.v0.position = map.apply(t.v0.position);
    t.v1.position = map.apply(t.v1.position);
    t.v2.position = map.apply(t.v2.position);
  }
  out.recompute_bounds();
  return {std::move(out), map};
}

const char* to_string(Axis axis) {
  switch (axis) {
    case Axis::X: return "x";
    case Axis::Y: return "y";
    case Axis::Z: return "z";
  }
  return "?";
}

Camera Camera::make(Projection kind, const Vec3& eye, const Vec3& view_dir, const Vec3& up, double extent_or_fov,
                    int width, int height, double near, double far) {
  Camera c;
  c.kind = kind;
  c.eye = eye;
  c.view_dir = normalize(view_dir);
  if (c.view_dir == Vec3{}) throw Error("camera: zero view direction");
  c.up = normalize(up - c.view_dir * dot(up, c.view_dir));
  if (length(up - c.view_dir * dot(up, c.view_dir)) < 1e-9) throw Error("camera: up is parallel to view direction");
  c.extent_or_fov = extent_or_fov;
  c.width = width;
  c.height = height;
  c.near = near;
  c.far = far;
  if (width < 1 || height < 1) throw Error("camera: resolution must be at least 1x1");
  if (!(near < far)) throw Error("camera: near must be less than far");
  if (kind == Projection::Perspective) {
    if (!(extent_or_fov > 0.0 && extent_or_fov < 180.0)) throw Error("camera: fov must lie in (0, 180) degrees");
    if (!(near > 0.0)) throw Error("camera: perspective near must be positive");
  } else if (!(extent_or_fov > 0.0)) {
    throw Error("camera: orthographic extent must be positive");
  }
  return c;
}

Mat4 Camera::view_projection() const {
  const Vec3 r = right();
  const Vec3 u = up;
  const Vec3 d = view_dir;
  Mat4 m;
  auto set_row = [&m](int row, const Vec3& axis, double scale, double offset) {
    m(row, 0) = axis.x * scale;
    m(row, 1) = axis.y * scale;
    m(row, 2) = axis.z * scale;
    m(row, 3) = offset;
  };
  if (kind == Projection::Orthographic) {
    const double half_h = 0.5 * extent_or_fov;
    const double half_w = half_h * aspect();
    set_row(0, r, 1.0 / half_w, -dot(r, eye) / half_w);
    set_row(1, u, 1.0 / half_h, -dot(u, eye) / half_h);
    const double inv_depth = 1.0 / (far - near);
    set_row(2, d, inv_depth, (-dot(d, eye) - near) * inv_depth);
    m(3, 3) = 1.0;
  } else {
    const double t = std::tan(0.5 * extent_or_fov * std::numbers::pi / 180.0);
    set_row(0, r, 1.0 / (t * aspect()), -dot(r, eye) / (t * aspect()));
    set_row(1, u, 1.0 / t, -dot(u, eye) / t);
    // z_clip / w = far * (depth - near) / (depth * (far - near))
    const double k = far / (far - near);
    set_row(2, d, k, (-dot(d, eye) - near) * k);
    set_row(3, d, 1.0, -dot(d, eye));
  }
  return m;
}

bool Camera::project(const Vec3& p, double& sx, double& sy, double& depth) const {
  double w = 1.0;
  const Vec3 clip = view_projection().transform_point(p, w);
  if (kind == Projection::Perspective && !(w > 0.0)) return false;
  sx = (clip.x / w + 1.0) * 0.5 * width;
  sy = (1.0 - clip.y / w) * 0.5 * height;
  depth = clip.z / w;
  return true;
}

Camera capture_camera(const Scene&, Axis axis, int resolution) {
  const Vec3 center{0.5, 0.5, 0.5};
  Vec3 dir;
  Vec3 up;
  switch (axis) {
    case Axis::X:
      dir = {-1.0, 0.0, 0.0};
      up = {0.0, 1.0, 0.0};
      break;
    case Axis::Y:
      dir = {0.0, -1.0, 0.0};
      up = {0.0, 0.0, -1.0};
      break;
    case Axis::Z:
      dir = {0.0, 0.0, -1.0};
      up = {0.0, 1.0, 0.0};
      break;
  }
  return Camera::make(Projection::Orthographic, center, dir, up, 1.0, resolution, resolution, -1.0, 1.0);
}

}  // namespace fhv
