// Copyright 2026 The FHV Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>

#include "fhv/math.hpp"
#include "fhv/scene.hpp"

namespace fhv {

struct Light {
  enum class Kind { Directional, Point };

  Kind kind = Kind::Directional;
  Vec3 direction{0.0, 0.0, 1.0};  // unit, pointing toward the light
  Vec3 position;
  Vec3 color{1.0, 1.0, 1.0};
  Vec3 ambient{0.0, 0.0, 0.0};

  static Light directional(const Vec3& toward_light, const Vec3& color, const Vec3& ambient = {});
  static Light point(const Vec3& position, const Vec3& color, const Vec3& ambient = {});

  Vec3 to_light(const Vec3& p) const;
  /// Distance along to_light(p) to the light; infinite for directional lights.
  double distance(const Vec3& p) const;
};

/// Blinn-Phong: ambient*kd + visibility*(max(0,n.l)*kd + max(0,n.h)^s*ks)*light,
/// clamped to [0,1]. Surfaces are two-sided: the normal is flipped toward the
/// viewer when it faces away.
Vec3 shade(const Vec3& position, const Vec3& normal, const Material& material, const Light& light,
           const Vec3& to_viewer, double visibility = 1.0);

/// Sum over lights, clamped once; `visibility` is empty or one factor per light.
Vec3 shade(const Vec3& position, const Vec3& normal, const Material& material, std::span<const Light> lights,
           const Vec3& to_viewer, std::span<const double> visibility = {});

/// Premultiplied color with coverage.
struct Premultiplied {
  Vec3 rgb;
  double alpha = 0.0;
};

inline Premultiplied premultiply(const Vec3& color, double alpha) { return {color * alpha, alpha}; }

/// Porter-Duff over on premultiplied inputs.
Premultiplied composite_over(const Premultiplied& front, const Premultiplied& back);

/// C += (1-A)*a*c, A += (1-A)*a.
Premultiplied front_to_back_accumulate(const Premultiplied& state, const Vec3& color, double alpha);

}  // namespace fhv
