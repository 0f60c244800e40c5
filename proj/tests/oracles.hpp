// Copyright 2026 The FHV Authors
// SPDX-License-Identifier: Apache-2.0

// Brute-force reference implementations and random generators shared by the
// test binaries. Nothing here calls the code under test's internals.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "fhv/math.hpp"
#include "fhv/raster.hpp"
#include "fhv/scene.hpp"

namespace oracle {

using fhv::Vec3;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  bool coin(double p = 0.5) { return uniform() < p; }

  Vec3 unit_vector() {
    for (;;) {
      const Vec3 v{uniform(-1, 1), uniform(-1, 1), uniform(-1, 1)};
      const double l = fhv::length(v);
      if (l > 1e-3 && l <= 1.0) return v * (1.0 / l);
    }
  }

  Vec3 point_in(double lo, double hi) { return {uniform(lo, hi), uniform(lo, hi), uniform(lo, hi)}; }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

using Pixel = std::pair<int, int>;

// Pixel-center coverage with vertices snapped to 1/256 pixel and the
// Direct3D-style top-left convention in a y-down raster: a center lying on an
// edge is covered only when that edge is a top edge (horizontal, third vertex
// below) or a left edge (interior lies toward +x).
inline std::set<Pixel> coverage(const std::array<double, 3>& sx, const std::array<double, 3>& sy, int width,
                                int height) {
  constexpr std::int64_t kScale = 256;
  std::int64_t x[3], y[3];
  for (int i = 0; i < 3; ++i) {
    x[i] = std::llround(sx[i] * kScale);
    y[i] = std::llround(sy[i] * kScale);
  }
  auto orient = [](std::int64_t ax, std::int64_t ay, std::int64_t bx, std::int64_t by, std::int64_t px,
                   std::int64_t py) { return (bx - ax) * (py - ay) - (by - ay) * (px - ax); };
  std::set<Pixel> out;
  if (orient(x[0], y[0], x[1], y[1], x[2], y[2]) == 0) return out;

  struct Edge {
    std::int64_t ax, ay, bx, by, cx, cy;
    bool owns_boundary;
  };
  std::array<Edge, 3> edges;
  for (int i = 0; i < 3; ++i) {
    const int a = i, b = (i + 1) % 3, c = (i + 2) % 3;
    Edge e{x[a], y[a], x[b], y[b], x[c], y[c], false};
    if (e.ay == e.by) {
      e.owns_boundary = e.cy > e.ay;  // top edge
    } else {
      // x of the edge's supporting line at the third vertex's row, compared
      // with the third vertex: numerator/denominator sign test.
      const std::int64_t num = (e.ax - e.cx) * (e.by - e.ay) + (e.cy - e.ay) * (e.bx - e.ax);
      const std::int64_t den = e.by - e.ay;
      e.owns_boundary = (num < 0) != (den < 0) && num != 0;  // edge lies left of the interior
    }
    edges[i] = e;
  }
  for (int py = 0; py < height; ++py) {
    for (int px = 0; px < width; ++px) {
      const std::int64_t cx = px * kScale + kScale / 2;
      const std::int64_t cy = py * kScale + kScale / 2;
      bool inside = true;
      for (const Edge& e : edges) {
        const std::int64_t sp = orient(e.ax, e.ay, e.bx, e.by, cx, cy);
        const std::int64_t sc = orient(e.ax, e.ay, e.bx, e.by, e.cx, e.cy);
        if (sp == 0) {
          inside = e.owns_boundary;
        } else {
          inside = (sp > 0) == (sc > 0);
        }
        if (!inside) break;
      }
      if (inside) out.insert({px, py});
    }
  }
  return out;
}

// Screen position of a world point under an orthographic capture camera.
inline void project_ortho(const fhv::Camera& cam, const Vec3& p, double& sx, double& sy) {
  const Vec3 d = p - cam.eye;
  const double half_h = 0.5 * cam.extent_or_fov;
  const double half_w = half_h * cam.aspect();
  const double u = fhv::dot(d, fhv::cross(cam.view_dir, cam.up)) / half_w;
  const double v = fhv::dot(d, cam.up) / half_h;
  sx = (u + 1.0) * 0.5 * cam.width;
  sy = (1.0 - v) * 0.5 * cam.height;
}

inline std::set<Pixel> triangle_coverage(const fhv::Triangle& t, const fhv::Camera& cam) {
  std::array<double, 3> sx{}, sy{};
  for (int i = 0; i < 3; ++i) project_ortho(cam, t.vertex(i).position, sx[i], sy[i]);
  return coverage(sx, sy, cam.width, cam.height);
}

// Every undirected edge of a closed mesh is shared by exactly two triangles.
inline bool is_closed(const fhv::Scene& scene) {
  auto key = [](const Vec3& p) {
    return std::array<long long, 3>{std::llround(p.x * 1e9), std::llround(p.y * 1e9), std::llround(p.z * 1e9)};
  };
  std::map<std::pair<std::array<long long, 3>, std::array<long long, 3>>, int> uses;
  for (const auto& t : scene.triangles) {
    for (int i = 0; i < 3; ++i) {
      auto a = key(t.vertex(i).position);
      auto b = key(t.vertex((i + 1) % 3).position);
      if (b < a) std::swap(a, b);
      ++uses[{a, b}];
    }
  }
  for (const auto& [edge, n] : uses) {
    if (n != 2) return false;
  }
  return !uses.empty();
}

// Every leaf of a 2^levels grid whose cell the segment [t0, t1] of the ray
// touches, found by testing each leaf box independently.
inline bool segment_hits_box(const Vec3& o, const Vec3& d, double t0, double t1, const Vec3& lo, const Vec3& hi) {
  for (int a = 0; a < 3; ++a) {
    if (d[a] == 0.0) {
      if (o[a] < lo[a] || o[a] > hi[a]) return false;
      continue;
    }
    double ta = (lo[a] - o[a]) / d[a];
    double tb = (hi[a] - o[a]) / d[a];
    if (ta > tb) std::swap(ta, tb);
    if (ta > t0) t0 = ta;
    if (tb < t1) t1 = tb;
    if (t0 > t1) return false;
  }
  return true;
}

}  // namespace oracle
