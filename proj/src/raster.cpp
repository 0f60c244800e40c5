// Copyright 2026 The FHV Authors
// SPDX-License-Identifier: Apache-2.0

#include "fhv/raster.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <string>
#include <vector>

#include "fhv/error.hpp"

namespace fhv {
namespace {

constexpr std::int64_t kOne = std::int64_t{1} << kSubpixelBits;
constexpr std::int64_t kHalf = kOne / 2;
// Screen coordinates beyond this many pixels are outside the guard band.
constexpr double kGuardBand = double(1 << 21);

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  const std::int64_t q = a / b;
  return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
}

bool top_left(std::int64_t dx, std::int64_t dy) { return dy < 0 || (dy == 0 && dx > 0); }

struct ScreenTriangle {
  double sx[3];
  double sy[3];
};

/// Calls emit(px, py, weights) for every covered pixel center inside `clip`.
/// Weights are the screen-space barycentrics of the caller's vertex order.
template <typename Emit>
std::size_t scan(const ScreenTriangle& tri, const PixelRect& clip, Emit&& emit) {
  std::int64_t X[3], Y[3];
  for (int i = 0; i < 3; ++i) {
    if (!(std::fabs(tri.sx[i]) < kGuardBand && std::fabs(tri.sy[i]) < kGuardBand)) return 0;
    X[i] = std::llround(tri.sx[i] * double(kOne));
    Y[i] = std::llround(tri.sy[i] * double(kOne));
  }
  std::int64_t area2 = (X[1] - X[0]) * (Y[2] - Y[0]) - (Y[1] - Y[0]) * (X[2] - X[0]);
  if (area2 == 0) return 0;
  int order[3] = {0, 1, 2};
  if (area2 < 0) {
    std::swap(order[1], order[2]);
    area2 = -area2;
  }
  const std::int64_t ax[3] = {X[order[0]], X[order[1]], X[order[2]]};
  const std::int64_t ay[3] = {Y[order[0]], Y[order[1]], Y[order[2]]};

  // Edge i is opposite vertex i.
  std::int64_t edx[3], edy[3];
  bool inclusive[3];
  for (int i = 0; i < 3; ++i) {
    const int a = (i + 1) % 3;
    const int b = (i + 2) % 3;
    edx[i] = ax[b] - ax[a];
    edy[i] = ay[b] - ay[a];
    inclusive[i] = top_left(edx[i], edy[i]);
  }

  const std::int64_t min_x = std::min({ax[0], ax[1], ax[2]});
  const std::int64_t max_x = std::max({ax[0], ax[1], ax[2]});
  const std::int64_t min_y = std::min({ay[0], ay[1], ay[2]});
  const std::int64_t max_y = std::max({ay[0], ay[1], ay[2]});
  // Pixel p has its center at p*kOne + kHalf.
  const std::int64_t px0 = std::max<std::int64_t>(clip.x0, floor_div(min_x - kHalf + kOne - 1, kOne));
  const std::int64_t px1 = std::min<std::int64_t>(clip.x1 - 1, floor_div(max_x - kHalf, kOne));
  const std::int64_t py0 = std::max<std::int64_t>(clip.y0, floor_div(min_y - kHalf + kOne - 1, kOne));
  const std::int64_t py1 = std::min<std::int64_t>(clip.y1 - 1, floor_div(max_y - kHalf, kOne));

  const double inv_area = 1.0 / double(area2);
  std::size_t emitted = 0;
  for (std::int64_t py = py0; py <= py1; ++py) {
    const std::int64_t cy = py * kOne + kHalf;
    for (std::int64_t px = px0; px <= px1; ++px) {
      const std::int64_t cx = px * kOne + kHalf;
      std::int64_t e[3];
      bool inside = true;
      for (int i = 0; i < 3; ++i) {
        const int a = (i + 1) % 3;
        e[i] = edx[i] * (cy - ay[a]) - edy[i] * (cx - ax[a]);
        if (e[i] < 0 || (e[i] == 0 && !inclusive[i])) {
          inside = false;
          break;
        }
      }
      if (!inside) continue;
      double w[3];
      for (int i = 0; i < 3; ++i) w[order[i]] = double(e[i]) * inv_area;
      emit(static_cast<int>(px), static_cast<int>(py), w);
      ++emitted;
    }
  }
  return emitted;
}

Vec3 blend(const Vec3& a, const Vec3& b, const Vec3& c, const double w[3]) {
  return a * w[0] + b * w[1] + c * w[2];
}

Vec3 interpolated_normal(const Triangle& tri, const double w[3]) {
  const Vec3 n = normalize(blend(tri.v0.normal, tri.v1.normal, tri.v2.normal, w));
  if (n == Vec3{}) return tri.degenerate() ? Vec3{0.0, 0.0, 1.0} : tri.face_normal;
  return n;
}

// Normal-space capture: the triangle is projected onto its own tangent plane
// with a pixel pitch of `footprint`, on a grid anchored at the world origin.
std::size_t rasterize_normal_space(const Triangle& tri, double footprint, const FragmentSink& sink) {
  if (tri.degenerate()) return 0;
  const auto basis = tangent_basis(tri.face_normal);
  ScreenTriangle st;
  double min_u = 0.0, min_v = 0.0;
  for (int i = 0; i < 3; ++i) {
    st.sx[i] = dot(tri.vertex(i).position, basis[0]) / footprint;
    st.sy[i] = dot(tri.vertex(i).position, basis[1]) / footprint;
    min_u = i == 0 ? st.sx[i] : std::min(min_u, st.sx[i]);
    min_v = i == 0 ? st.sy[i] : std::min(min_v, st.sy[i]);
  }
  const int origin_x = static_cast<int>(std::floor(min_u));
  const int origin_y = static_cast<int>(std::floor(min_v));
  const PixelRect unbounded{-(1 << 22), -(1 << 22), 1 << 22, 1 << 22};
  const Vec3 view = -tri.face_normal;
  const Vec3 center{0.5, 0.5, 0.5};
  return scan(st, unbounded, [&](int px, int py, const double w[3]) {
    EmittedFragment f;
    f.x = px - origin_x;
    f.y = py - origin_y;
    f.world_position = blend(tri.v0.position, tri.v1.position, tri.v2.position, w);
    f.world_normal = interpolated_normal(tri, w);
    f.depth = 0.5 * (dot(f.world_position - center, view) + 1.0);
    f.material_id = tri.material_id;
    f.object_id = tri.object_id;
    sink(f);
  });
}

}  // namespace

RasterConfig RasterConfig::from_camera(const Camera& camera) {
  RasterConfig cfg;
  cfg.width = camera.width;
  cfg.height = camera.height;
  cfg.projection = camera.view_projection();
  return cfg;
}

std::size_t rasterize_triangle(const Triangle& tri, const RasterConfig& cfg, const FragmentSink& sink,
                               const std::optional<PixelRect>& scissor) {
  if (tri.degenerate()) return 0;
  ScreenTriangle st;
  double depth[3];
  double inv_w[3];
  for (int i = 0; i < 3; ++i) {
    double w = 1.0;
    const Vec3 clip = cfg.projection.transform_point(tri.vertex(i).position, w);
    if (!(w > 0.0)) return 0;
    inv_w[i] = 1.0 / w;
    st.sx[i] = (clip.x * inv_w[i] + 1.0) * 0.5 * cfg.width;
    st.sy[i] = (1.0 - clip.y * inv_w[i]) * 0.5 * cfg.height;
    depth[i] = clip.z * inv_w[i];
  }
  PixelRect clip{0, 0, cfg.width, cfg.height};
  if (scissor) {
    clip.x0 = std::max(clip.x0, scissor->x0);
    clip.y0 = std::max(clip.y0, scissor->y0);
    clip.x1 = std::min(clip.x1, scissor->x1);
    clip.y1 = std::min(clip.y1, scissor->y1);
  }
  const bool affine = cfg.projection.is_affine();
  return scan(st, clip, [&](int px, int py, const double w[3]) {
    double pw[3] = {w[0], w[1], w[2]};
    if (!affine) {
      const double sum = w[0] * inv_w[0] + w[1] * inv_w[1] + w[2] * inv_w[2];
      for (int i = 0; i < 3; ++i) pw[i] = w[i] * inv_w[i] / sum;
    }
    EmittedFragment f;
    f.x = px;
    f.y = py;
    f.world_position = blend(tri.v0.position, tri.v1.position, tri.v2.position, pw);
    f.world_normal = interpolated_normal(tri, pw);
    f.depth = w[0] * depth[0] + w[1] * depth[1] + w[2] * depth[2];
    f.material_id = tri.material_id;
    f.object_id = tri.object_id;
    sink(f);
  });
}

std::array<Vec3, 3> tangent_basis(const Vec3& normal) {
  const Vec3 n = normalize(normal);
  if (n == Vec3{}) throw Error("tangent_basis: zero-length normal");
  // Branchless construction (Duff et al. 2017), continuous except at n.z = 0 sign flip.
  const double sign = std::copysign(1.0, n.z);
  const double a = -1.0 / (sign + n.z);
  const double b = n.x * n.y * a;
  const Vec3 tangent{1.0 + sign * n.x * n.x * a, sign * b, -sign * n.x};
  const Vec3 bitangent{b, sign + n.y * n.y * a, -n.y};
  return {tangent, bitangent, n};
}

const char* to_string(CaptureStrategy::Kind kind) {
  switch (kind) {
    case CaptureStrategy::Kind::OneView: return "one-view";
    case CaptureStrategy::Kind::ThreeSeparate: return "three-separate";
    case CaptureStrategy::Kind::ThreeWayGeometry: return "three-way";
    case CaptureStrategy::Kind::NormalSpace: return "normal";
  }
  return "?";
}

CaptureStrategy parse_strategy(const std::string& text) {
  std::string s;
  for (char c : text) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  auto axis_suffix = [&](const std::string& prefix) -> std::optional<Axis> {
    if (s == prefix) return Axis::Z;
    if (s.size() == prefix.size() + 2 && s.compare(0, prefix.size(), prefix) == 0 && s[prefix.size()] == ':') {
      switch (s.back()) {
        case 'x': return Axis::X;
        case 'y': return Axis::Y;
        case 'z': return Axis::Z;
        default: break;
      }
    }
    return std::nullopt;
  };
  if (auto axis = axis_suffix("one-view")) return CaptureStrategy::one_view(*axis);
  if (auto axis = axis_suffix("1-pass/view")) return CaptureStrategy::one_view(*axis);
  if (s == "three-separate" || s == "3-pass/1-way") return CaptureStrategy::three_separate();
  if (s == "three-way" || s == "1-pass/3-way") return CaptureStrategy::three_way_geometry();
  if (s == "normal" || s == "normal-space" || s == "1-pass/normal") return CaptureStrategy::normal_space();
  throw Error("unknown capture strategy '" + text + "'");
}

RasterConfig capture_config(int resolution) {
  return RasterConfig::from_camera(capture_camera(Scene{}, Axis::Z, resolution));
}

double world_pixel_footprint(const RasterConfig& cfg) {
  const auto& p = cfg.projection;
  if (!p.is_affine()) throw Error("world_pixel_footprint: capture configuration must be orthographic");
  const double units_per_ndc = 1.0 / std::sqrt(p(0, 0) * p(0, 0) + p(0, 1) * p(0, 1) + p(0, 2) * p(0, 2));
  return 2.0 * units_per_ndc / cfg.width;
}

CaptureStats capture_pass(const Scene& scene, CaptureStrategy strategy, const RasterConfig& cfg,
                          const FragmentSink& sink, Execution exec) {
  using Kind = CaptureStrategy::Kind;
  const int resolution = cfg.width;
  const std::uint32_t objects = std::max<std::uint32_t>(1, scene.object_count());
  const std::size_t n = scene.triangles.size();

  CaptureStats stats;
  std::atomic<std::uint64_t> emitted{0};

  auto run_axes = [&](const std::vector<Axis>& axes) {
    std::vector<RasterConfig> configs;
    for (Axis a : axes) configs.push_back(RasterConfig::from_camera(capture_camera(scene, a, resolution)));
    parallel_chunks(n, exec, [&](std::size_t begin, std::size_t end, std::size_t) {
      std::uint64_t local = 0;
      for (std::size_t i = begin; i < end; ++i) {
        for (const auto& c : configs) local += rasterize_triangle(scene.triangles[i], c, sink);
      }
      emitted += local;
    });
  };

  switch (strategy.kind) {
    case Kind::OneView:
      run_axes({strategy.axis});
      stats.passes = 1;
      stats.triangles_processed = n;
      stats.draw_batches = objects;
      break;
    case Kind::ThreeSeparate:
      for (Axis a : {Axis::X, Axis::Y, Axis::Z}) run_axes({a});
      stats.passes = 3;
      stats.triangles_processed = 3 * n;
      stats.draw_batches = 3 * objects;
      break;
    case Kind::ThreeWayGeometry:
      run_axes({Axis::X, Axis::Y, Axis::Z});
      stats.passes = 1;
      stats.triangles_processed = 3 * n;
      stats.draw_batches = objects;
      break;
    case Kind::NormalSpace: {
      const double footprint = world_pixel_footprint(cfg);
      parallel_chunks(n, exec, [&](std::size_t begin, std::size_t end, std::size_t) {
        std::uint64_t local = 0;
        for (std::size_t i = begin; i < end; ++i) local += rasterize_normal_space(scene.triangles[i], footprint, sink);
        emitted += local;
      });
      stats.passes = 1;
      stats.triangles_processed = n;
      stats.draw_batches = objects;
      break;
    }
  }
  stats.fragments_emitted = emitted.load();
  return stats;
}

}  // namespace fhv
