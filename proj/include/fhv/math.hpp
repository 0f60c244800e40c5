// Copyright 2026 The FHV Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>

namespace fhv {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  constexpr double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Vec3& operator*=(double s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }

  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
constexpr Vec3 hadamard(const Vec3& a, const Vec3& b) { return {a.x * b.x, a.y * b.y, a.z * b.z}; }

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double length(const Vec3& a) { return std::sqrt(dot(a, a)); }

/// Returns the zero vector for zero-length input.
inline Vec3 normalize(const Vec3& a) {
  const double len = length(a);
  return len > 0.0 ? a * (1.0 / len) : Vec3{};
}

inline bool is_finite(const Vec3& a) {
  return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}

inline Vec3 min(const Vec3& a, const Vec3& b) {
  return {std::fmin(a.x, b.x), std::fmin(a.y, b.y), std::fmin(a.z, b.z)};
}
inline Vec3 max(const Vec3& a, const Vec3& b) {
  return {std::fmax(a.x, b.x), std::fmax(a.y, b.y), std::fmax(a.z, b.z)};
}

struct Aabb {
  Vec3 min{};
  Vec3 max{};

  Vec3 extent() const { return max - min; }
  Vec3 center() const { return (min + max) * 0.5; }
  bool contains(const Vec3& p) const {
    return p.x >= min.x && p.y >= min.y && p.z >= min.z && p.x <= max.x && p.y <= max.y &&
           p.z <= max.z;
  }
};

/// Row-major 4x4 matrix acting on column vectors.
struct Mat4 {
  std::array<double, 16> m{};

  static constexpr Mat4 identity() {
    Mat4 r;
    r.m[0] = r.m[5] = r.m[10] = r.m[15] = 1.0;
    return r;
  }

  constexpr double operator()(int row, int col) const { return m[row * 4 + col]; }
  constexpr double& operator()(int row, int col) { return m[row * 4 + col]; }

  /// Transforms the point (p, 1); `w` receives the homogeneous coordinate.
  constexpr Vec3 transform_point(const Vec3& p, double& w) const {
    const double x = m[0] * p.x + m[1] * p.y + m[2] * p.z + m[3];
    const double y = m[4] * p.x + m[5] * p.y + m[6] * p.z + m[7];
    const double z = m[8] * p.x + m[9] * p.y + m[10] * p.z + m[11];
    w = m[12] * p.x + m[13] * p.y + m[14] * p.z + m[15];
    return {x, y, z};
  }

  bool is_affine() const { return m[12] == 0.0 && m[13] == 0.0 && m[14] == 0.0 && m[15] == 1.0; }
  double determinant() const;
};

inline double Mat4::determinant() const {
  auto minor3 = [this](int skip_col) {
    int c[3];
    for (int i = 0, k = 0; i < 4; ++i) {
      if (i != skip_col) c[k++] = i;
    }
    const auto& a = *this;
    return a(1, c[0]) * (a(2, c[1]) * a(3, c[2]) - a(2, c[2]) * a(3, c[1])) -
           a(1, c[1]) * (a(2, c[0]) * a(3, c[2]) - a(2, c[2]) * a(3, c[0])) +
           a(1, c[2]) * (a(2, c[0]) * a(3, c[1]) - a(2, c[1]) * a(3, c[0]));
  };
  double det = 0.0;
  for (int col = 0; col < 4; ++col) {
    const double sign = (col % 2 == 0) ? 1.0 : -1.0;
    det += sign * (*this)(0, col) * minor3(col);
  }
  return det;
}

}  // namespace fhv
