// Copyright 2026 The FHV Authors
// SPDX-License-Identifier: Apache-2.0

#include "fhv/shading.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fhv/error.hpp"

namespace fhv {
namespace {

Vec3 clamp01(const Vec3& c) {
  return {std::clamp(c.x, 0.0, 1.0), std::clamp(c.y, 0.0, 1.0), std::clamp(c.z, 0.0, 1.0)};
}

Vec3 unclamped(const Vec3& position, const Vec3& normal, const Material& m, const Light& light, const Vec3& to_viewer,
               double visibility) {
  Vec3 n = normal;
  if (dot(n, to_viewer) < 0.0) n = -n;
  const Vec3 l = light.to_light(position);
  Vec3 c = hadamard(light.ambient, m.diffuse);
  if (visibility <= 0.0) return c;
  const double ndotl = std::max(0.0, dot(n, l));
  const Vec3 h = normalize(l + to_viewer);
  const double ndoth = std::max(0.0, dot(n, h));
  const double spec = std::pow(ndoth, m.shininess);
  c += hadamard(m.diffuse * ndotl + m.specular * spec, light.color) * visibility;
  return c;
}

}  // namespace

Light Light::directional(const Vec3& toward_light, const Vec3& color, const Vec3& ambient) {
  Light l;
  l.kind = Kind::Directional;
  l.direction = normalize(toward_light);
  if (l.direction == Vec3{}) throw Error("Light: zero direction");
  l.color = color;
  l.ambient = ambient;
  return l;
}

Light Light::point(const Vec3& position, const Vec3& color, const Vec3& ambient) {
  Light l;
  l.kind = Kind::Point;
  l.position = position;
  l.color = color;
  l.ambient = ambient;
  return l;
}

Vec3 Light::to_light(const Vec3& p) const {
  return kind == Kind::Directional ? direction : normalize(position - p);
}

double Light::distance(const Vec3& p) const {
  return kind == Kind::Directional ? std::numeric_limits<double>::infinity() : length(position - p);
}

Vec3 shade(const Vec3& position, const Vec3& normal, const Material& material, const Light& light,
           const Vec3& to_viewer, double visibility) {
  return clamp01(unclamped(position, normal, material, light, to_viewer, visibility));
}

Vec3 shade(const Vec3& position, const Vec3& normal, const Material& material, std::span<const Light> lights,
           const Vec3& to_viewer, std::span<const double> visibility) {
  Vec3 c;
  for (std::size_t i = 0; i < lights.size(); ++i) {
    c += unclamped(position, normal, material, lights[i], to_viewer, visibility.empty() ? 1.0 : visibility[i]);
  }
  return clamp01(c);
}

Premultiplied composite_over(const Premultiplied& front, const Premultiplied& back) {
  const double t = 1.0 - front.alpha;
  return {front.rgb + back.rgb * t, front.alpha + back.alpha * t};
}

Premultiplied front_to_back_accumulate(const Premultiplied& state, const Vec3& color, double alpha) {
  const double t = (1.0 - state.alpha) * alpha;
  return {state.rgb + color * t, state.alpha + t};
}

}  // namespace fhv
