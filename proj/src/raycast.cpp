// Copyright 2026 The FHV Authors
// SPDX-License-Identifier: Apache-2.0

#include "fhv/raycast.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <vector>

#include "fhv/error.hpp"
#include "fhv/reconstruct.hpp"

namespace fhv {
namespace {

Vec3 to_vec3(const std::array<float, 3>& a) { return {a[0], a[1], a[2]}; }

double material_alpha(std::span<const Material> materials, std::uint32_t id) {
  return material_or_default(materials, id).alpha;
}

struct Traversal {
  const OccupancyPyramid& pyramid;
  const Ray& ray;
  const LeafVisitor& visitor;
  std::size_t visited = 0;

  // Returns false once the visitor asked to stop.
  bool descend(int level, std::uint64_t node, std::uint32_t x, std::uint32_t y, std::uint32_t z) {
    const std::uint8_t mask = pyramid.mask(level, node);
    if (mask == 0) return true;
    const double child_size = 1.0 / static_cast<double>(std::uint64_t{1} << (level + 1));

    struct Entry {
      double t_enter, t_exit;
      int child;
    };
    Entry entries[8];
    int n = 0;
    for (int c = 0; c < 8; ++c) {
      if (!(mask & (1u << c))) continue;
      const Vec3 lo{(2 * x + (c & 1)) * child_size, (2 * y + ((c >> 1) & 1)) * child_size,
                    (2 * z + ((c >> 2) & 1)) * child_size};
      const Vec3 hi{lo.x + child_size, lo.y + child_size, lo.z + child_size};
      double t0, t1;
      if (!intersect_box(ray, lo, hi, t0, t1)) continue;
      // Insertion keeps (t_enter, child) ascending.
      int k = n++;
      while (k > 0 && entries[k - 1].t_enter > t0) {
        entries[k] = entries[k - 1];
        --k;
      }
      entries[k] = {t0, t1, c};
    }

    const bool children_are_leaves = level + 1 == pyramid.levels();
    for (int i = 0; i < n; ++i) {
      const int c = entries[i].child;
      const std::uint64_t child = node * 8 + static_cast<std::uint64_t>(c);
      if (children_are_leaves) {
        ++visited;
        if (!visitor(child, entries[i].t_enter, entries[i].t_exit)) return false;
      } else if (!descend(level + 1, child, 2 * x + (c & 1), 2 * y + ((c >> 1) & 1), 2 * z + ((c >> 2) & 1))) {
        return false;
      }
    }
    return true;
  }
};

struct Candidate {
  double t;
  std::uint32_t fragment;
};

// Ascending t, equal t by pool index.
void insertion_sort(std::vector<Candidate>& hits) {
  for (std::size_t i = 1; i < hits.size(); ++i) {
    const Candidate h = hits[i];
    std::size_t k = i;
    while (k > 0 && (hits[k - 1].t > h.t || (hits[k - 1].t == h.t && hits[k - 1].fragment > h.fragment))) {
      hits[k] = hits[k - 1];
      --k;
    }
    hits[k] = h;
  }
}

double shadow_epsilon(const RaycastConfig& cfg) {
  return cfg.shadow_epsilon > 0.0 ? cfg.shadow_epsilon : 2.0 * cfg.splat_radius_world;
}

template <typename Fhv>
double transmittance_impl(const Fhv& fhv, std::span<const Material> materials, const Vec3& point, const Light& light,
                          const RaycastConfig& cfg, const std::optional<ShadowOrigin>& origin) {
  const double eps = shadow_epsilon(cfg);
  Ray ray;
  ray.direction = light.to_light(point);
  ray.origin = point + ray.direction * eps;
  ray.t_min = 0.0;
  ray.t_max = std::max(0.0, light.distance(point) - eps);
  double transmittance = 1.0;
  traverse_octree(fhv.pyramid, ray, [&](std::uint64_t leaf, double, double) {
    for_each_leaf_fragment(fhv, leaf, [&](std::uint32_t, const FragmentRecord& r) {
      if (transmittance <= 0.0) return;
      if (origin && origin->object_id == r.object_id && origin->leaf == leaf) return;
      if (!intersect_fragment(ray, r, cfg.splat_radius_world)) return;
      transmittance *= 1.0 - material_alpha(materials, r.material_id);
    });
    return transmittance > 0.0;
  });
  return std::max(0.0, transmittance);
}

template <typename Fhv>
PixelSample raycast_impl(const Fhv& fhv, std::span<const Material> materials, const Ray& ray,
                         std::span<const Light> lights, const RaycastConfig& cfg, RaycastStats* stats) {
  RaycastStats local;
  local.rays = 1;
  Premultiplied acc;
  PixelSample sample;
  std::vector<Candidate> hits;
  std::vector<double> visibility(lights.size(), 1.0);
  const bool opaque = cfg.mode == RaycastMode::OpaqueNearest;
  const bool shadows = cfg.mode == RaycastMode::TransparencyShadows;

  local.visited_leaves = traverse_octree(fhv.pyramid, ray, [&](std::uint64_t leaf, double, double) {
    hits.clear();
    for_each_leaf_fragment(fhv, leaf, [&](std::uint32_t index, const FragmentRecord& r) {
      ++local.tested_fragments;
      if (auto t = intersect_fragment(ray, r, cfg.splat_radius_world)) hits.push_back({*t, index});
    });
    if (hits.empty()) return true;
    local.hits += hits.size();
    insertion_sort(hits);

    for (const auto& hit : hits) {
      const FragmentRecord& r = fhv.pool[hit.fragment];
      const Material& m = material_or_default(materials, r.material_id);
      const Vec3 p = to_vec3(r.position);
      if (shadows) {
        const ShadowOrigin origin{r.object_id, leaf};
        for (std::size_t i = 0; i < lights.size(); ++i) {
          visibility[i] = transmittance_impl(fhv, materials, p, lights[i], cfg, origin);
        }
      }
      const Vec3 c = shade(p, to_vec3(r.normal), m, lights, -ray.direction,
                           shadows ? std::span<const double>(visibility) : std::span<const double>());
      const double alpha = opaque ? 1.0 : m.alpha;
      if (alpha > 0.0 && sample.object_id < 0) {
        sample.object_id = static_cast<std::int32_t>(r.object_id);
        sample.depth = hit.t;
      }
      acc = front_to_back_accumulate(acc, c, alpha);
      if (opaque) break;
    }
    if (opaque || acc.alpha >= cfg.alpha_cutoff) {
      if (!opaque) ++local.terminated_early;
      return false;
    }
    return true;
  });

  const Premultiplied background = premultiply({cfg.background[0], cfg.background[1], cfg.background[2]},
                                               cfg.background[3]);
  const Premultiplied out = composite_over(acc, background);
  sample.color = {static_cast<float>(out.rgb.x), static_cast<float>(out.rgb.y), static_cast<float>(out.rgb.z),
                  static_cast<float>(out.alpha)};
  if (stats) *stats += local;
  return sample;
}

template <typename Fhv>
ImageBuffer render_impl(const Fhv& fhv, std::span<const Material> materials, const Camera& camera,
                        std::span<const Light> lights, const RaycastConfig& cfg, Execution exec, RaycastStats* stats) {
  ImageBuffer image(camera.width, camera.height, cfg.background);
  const auto rows = static_cast<std::size_t>(camera.height);
  std::vector<RaycastStats> partial(chunk_count(rows, exec));
  parallel_chunks(rows, exec, [&](std::size_t y0, std::size_t y1, std::size_t chunk) {
    for (std::size_t y = y0; y < y1; ++y) {
      for (int x = 0; x < camera.width; ++x) {
        const Ray ray = gen_primary_ray(camera, x, static_cast<int>(y));
        const PixelSample s = raycast_impl(fhv, materials, ray, lights, cfg, &partial[chunk]);
        const std::size_t i = image.index(x, static_cast<int>(y));
        image.pixels[i] = s.color;
        image.object_ids[i] = s.object_id;
        image.depth[i] = s.depth;
      }
    }
  });
  if (stats) {
    for (const auto& p : partial) *stats += p;
  }
  return image;
}

}  // namespace

RaycastStats& RaycastStats::operator+=(const RaycastStats& o) {
  rays += o.rays;
  visited_leaves += o.visited_leaves;
  tested_fragments += o.tested_fragments;
  hits += o.hits;
  terminated_early += o.terminated_early;
  return *this;
}

const char* to_string(RaycastMode mode) {
  switch (mode) {
    case RaycastMode::OpaqueNearest: return "opaque";
    case RaycastMode::Transparency: return "transparency";
    case RaycastMode::TransparencyShadows: return "shadows";
  }
  return "?";
}

RaycastMode parse_raycast_mode(const std::string& text) {
  std::string s;
  for (char c : text) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "opaque" || s == "opaque_nearest" || s == "r") return RaycastMode::OpaqueNearest;
  if (s == "transparency" || s == "r/t") return RaycastMode::Transparency;
  if (s == "shadows" || s == "transparency_shadows" || s == "r/t/s") return RaycastMode::TransparencyShadows;
  throw Error("unknown raycast mode '" + text + "'");
}

double default_raycast_radius(double capture_footprint, int levels) {
  const double half_leaf = 0.5 / static_cast<double>(std::uint64_t{1} << levels);
  return std::min(capture_footprint / std::numbers::sqrt2, half_leaf);
}

Ray gen_primary_ray(const Camera& camera, int px, int py) {
  const double ndc_x = 2.0 * (px + 0.5) / camera.width - 1.0;
  const double ndc_y = 1.0 - 2.0 * (py + 0.5) / camera.height;
  const Vec3 right = camera.right();
  Ray ray;
  if (camera.kind == Projection::Orthographic) {
    const double half_h = 0.5 * camera.extent_or_fov;
    const double half_w = half_h * camera.aspect();
    ray.origin = camera.eye + right * (ndc_x * half_w) + camera.up * (ndc_y * half_h) + camera.view_dir * camera.near;
    ray.direction = camera.view_dir;
    ray.t_min = 0.0;
    ray.t_max = camera.far - camera.near;
  } else {
    const double t = std::tan(0.5 * camera.extent_or_fov * std::numbers::pi / 180.0);
    ray.origin = camera.eye;
    ray.direction = normalize(camera.view_dir + right * (ndc_x * t * camera.aspect()) + camera.up * (ndc_y * t));
    ray.t_min = 0.0;
    ray.t_max = std::numeric_limits<double>::infinity();
  }
  return ray;
}

bool intersect_box(const Ray& ray, const Vec3& lo, const Vec3& hi, double& t_enter, double& t_exit) {
  double t0 = ray.t_min;
  double t1 = ray.t_max;
  for (int a = 0; a < 3; ++a) {
    const double o = ray.origin[a];
    const double d = ray.direction[a];
    if (d == 0.0) {
      if (o < lo[a] || o > hi[a]) return false;
      continue;
    }
    const double inv = 1.0 / d;
    double ta = (lo[a] - o) * inv;
    double tb = (hi[a] - o) * inv;
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
  }
  t_enter = t0;
  t_exit = t1;
  return t0 <= t1;
}

std::size_t traverse_octree(const OccupancyPyramid& pyramid, const Ray& ray, const LeafVisitor& visitor) {
  if (pyramid.levels() < 1) return 0;
  double t0, t1;
  if (!intersect_box(ray, {0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}, t0, t1)) return 0;
  Traversal walk{pyramid, ray, visitor};
  walk.descend(0, 0, 0, 0, 0);
  return walk.visited;
}

std::optional<double> intersect_fragment(const Ray& ray, const FragmentRecord& fragment, double radius) {
  const Vec3 offset = to_vec3(fragment.position) - ray.origin;
  const double t = dot(offset, ray.direction);
  if (t < ray.t_min || t > ray.t_max) return std::nullopt;
  const Vec3 perpendicular = offset - ray.direction * t;
  if (dot(perpendicular, perpendicular) > radius * radius) return std::nullopt;
  return t;
}

PixelSample raycast_pixel(const FhvPofl& fhv, std::span<const Material> materials, const Ray& ray,
                          std::span<const Light> lights, const RaycastConfig& cfg, RaycastStats* stats) {
  return raycast_impl(fhv, materials, ray, lights, cfg, stats);
}

PixelSample raycast_pixel(const FhvPofa& fhv, std::span<const Material> materials, const Ray& ray,
                          std::span<const Light> lights, const RaycastConfig& cfg, RaycastStats* stats) {
  return raycast_impl(fhv, materials, ray, lights, cfg, stats);
}

double shadow_transmittance(const FhvPofl& fhv, std::span<const Material> materials, const Vec3& point,
                            const Light& light, const RaycastConfig& cfg, const std::optional<ShadowOrigin>& origin) {
  return transmittance_impl(fhv, materials, point, light, cfg, origin);
}

double shadow_transmittance(const FhvPofa& fhv, std::span<const Material> materials, const Vec3& point,
                            const Light& light, const RaycastConfig& cfg, const std::optional<ShadowOrigin>& origin) {
  return transmittance_impl(fhv, materials, point, light, cfg, origin);
}

ImageBuffer raycast_render(const FhvPofl& fhv, std::span<const Material> materials, const Camera& camera,
                           std::span<const Light> lights, const RaycastConfig& cfg, Execution exec,
                           RaycastStats* stats) {
  return render_impl(fhv, materials, camera, lights, cfg, exec, stats);
}

ImageBuffer raycast_render(const FhvPofa& fhv, std::span<const Material> materials, const Camera& camera,
                           std::span<const Light> lights, const RaycastConfig& cfg, Execution exec,
                           RaycastStats* stats) {
  return render_impl(fhv, materials, camera, lights, cfg, exec, stats);
}

}  // namespace fhv
