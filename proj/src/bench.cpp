// Copyright 2026 The FHV Authors
// SPDX-License-Identifier: Apache-2.0

#include "fhv/bench.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <variant>

#include "fhv/bundled_scenes.hpp"
#include "fhv/image.hpp"
#include "fhv/reconstruct.hpp"
#include "fhv/snapshot.hpp"

namespace fhv::bench {
namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

json stats_json(const CaptureStats& s) {
  return {{"fragments_emitted", s.fragments_emitted},
          {"triangles_processed", s.triangles_processed},
          {"passes", s.passes},
          {"draw_batches", s.draw_batches}};
}

json raycast_json(const RaycastStats& s) {
  return {{"rays", s.rays},
          {"visited_leaves", s.visited_leaves},
          {"tested_fragments", s.tested_fragments},
          {"hits", s.hits},
          {"terminated_early", s.terminated_early}};
}

json pool_json(const FragmentPool& pool) {
  return {{"overflowed", pool.overflowed()},
          {"requested", pool.requested()},
          {"capacity", pool.capacity()},
          {"stored", pool.size()}};
}

void write_json(const std::filesystem::path& path, const json& report) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << report.dump(2) << '\n';
}

std::string frame_stem(int frame) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%03d", frame);
  return buf;
}

double capture_footprint(int resolution) { return world_pixel_footprint(capture_config(resolution)); }

struct Built {
  AnyFhv fhv;
  double build_ms = 0.0;
};

Built build_layout(const Scene& scene, const RunConfig& config) {
  const auto start = Clock::now();
  const int res = config.capture_resolution;
  const std::uint32_t capacity = config.capacity.value_or(default_capacity(res, res));
  switch (config.layout) {
    case Layout::Ppfl: {
      auto fhv = build_ppfl(scene, config.strategy.axis, res, capacity, config.exec());
      return {std::move(fhv), elapsed_ms(start)};
    }
    case Layout::Pofl: {
      auto fhv = build_pofl(scene, config.strategy, res, config.levels, capacity, config.exec());
      return {std::move(fhv), elapsed_ms(start)};
    }
    case Layout::Pofa: {
      auto fhv = pofa_build(scene, config.strategy, res, config.levels, config.exec());
      return {std::move(fhv), elapsed_ms(start)};
    }
    case Layout::DeferredShading:
      break;
  }
  throw BenchError(kIncompatible, "deferred shading has no fragment history to build");
}

const FragmentPool& pool_of(const AnyFhv& fhv) {
  return std::visit([](const auto& f) -> const FragmentPool& { return f.pool; }, fhv);
}

const CaptureStats& stats_of(const AnyFhv& fhv) {
  return std::visit([](const auto& f) -> const CaptureStats& { return f.stats; }, fhv);
}

int resolution_of(const AnyFhv& fhv) {
  if (const auto* p = std::get_if<FhvPpfl>(&fhv)) return p->directory.width;
  if (const auto* p = std::get_if<FhvPofl>(&fhv)) return p->capture_resolution;
  return std::get<FhvPofa>(fhv).capture_resolution;
}

int levels_of(const AnyFhv& fhv) {
  if (const auto* p = std::get_if<FhvPofl>(&fhv)) return p->levels();
  if (const auto* p = std::get_if<FhvPofa>(&fhv)) return p->levels();
  return 0;
}

void prepare_out_dir(const RunConfig& config) {
  std::error_code ec;
  std::filesystem::create_directories(config.out_dir, ec);
  if (ec) throw BenchError(kUsage, "cannot create " + config.out_dir.string() + ": " + ec.message());
}

void write_frame(const std::filesystem::path& dir, int frame, const ImageBuffer& image, json& entry) {
  const auto stem = frame_stem(frame);
  write_file(dir / (stem + ".ppm"), encode_ppm(image));
  write_file(dir / (stem + ".rgba32f"), encode_float_dump(image));
  entry["image"] = stem + ".ppm";
}

}  // namespace

const char* to_string(Technique technique) {
  switch (technique) {
    case Technique::Deferred: return "deferred";
    case Technique::Splat: return "splat";
    case Technique::Raycast: return "raycast";
  }
  return "?";
}

Technique parse_technique(const std::string& text) {
  const auto s = lower(text);
  if (s == "deferred" || s == "ds") return Technique::Deferred;
  if (s == "splat") return Technique::Splat;
  if (s == "raycast") return Technique::Raycast;
  throw BenchError(kUsage, "unknown technique '" + text + "'");
}

void RunConfig::validate() const {
  if (capture_resolution < 1 || out_width < 1 || out_height < 1) {
    throw BenchError(kUsage, "resolutions must be >= 1");
  }
  if (levels < 1 || levels > 10) throw BenchError(kUsage, "levels must be in [1, 10]");
  if (orbit_frames < 1) throw BenchError(kUsage, "orbit needs at least one frame");
  if (threads < 1) throw BenchError(kUsage, "threads must be >= 1");
  if (splat_radius < 0.0) throw BenchError(kUsage, "splat radius must be >= 0");
  if (!(alpha_cutoff > 0.0)) throw BenchError(kUsage, "alpha cutoff must be > 0");
}

Scene load_run_scene(const RunConfig& config) {
  constexpr std::string_view kBuiltin = "builtin:";
  try {
    if (config.scene.rfind(kBuiltin, 0) == 0) return bundled_scene(config.scene.substr(kBuiltin.size()));
    std::optional<std::filesystem::path> table;
    if (!config.materials.empty()) table = config.materials;
    return normalize_scene(load_scene(config.scene, table), config.margin).first;
  } catch (const std::exception& e) {
    throw BenchError(kLoadFailure, std::string("scene load failed: ") + e.what());
  }
}

std::vector<Light> default_lights() {
  return {Light::directional(normalize(Vec3{0.3, 0.5, 1.0}), {0.9, 0.9, 0.9}, {0.15, 0.15, 0.15})};
}

std::vector<Camera> parse_pose_file(const std::string& text, int width, int height, const std::string& source) {
  std::vector<Camera> poses;
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<double> v;
    double x;
    while (fields >> x) v.push_back(x);
    if (!fields.eof()) throw ParseError(source, number, "non-numeric field");
    if (v.empty()) continue;
    if (v.size() != 10) throw ParseError(source, number, "expected 10 numbers, got " + std::to_string(v.size()));
    const Vec3 eye{v[0], v[1], v[2]};
    const Vec3 dir{v[3], v[4], v[5]};
    const Vec3 up{v[6], v[7], v[8]};
    const double fov = v[9];
    if (fov == 0.0) throw ParseError(source, number, "fov must be nonzero");
    try {
      if (fov > 0.0) {
        poses.push_back(Camera::make(Projection::Perspective, eye, dir, up, fov, width, height, 0.01, 10.0));
      } else {
        poses.push_back(Camera::make(Projection::Orthographic, eye, dir, up, -fov, width, height, 0.0, 4.0));
      }
    } catch (const Error& e) {
      throw ParseError(source, number, e.what());
    }
  }
  if (poses.empty()) throw ParseError(source, number, "no poses");
  return poses;
}

std::vector<Camera> orbit_path(int frames, int width, int height, std::uint64_t seed) {
  double phase = 0.0;
  if (seed != 0) {
    std::mt19937_64 rng(seed);
    phase = std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(rng);
  }
  const Vec3 center{0.5, 0.5, 0.5};
  std::vector<Camera> path;
  for (int i = 0; i < frames; ++i) {
    const double a = phase + 2.0 * std::numbers::pi * i / frames;
    const Vec3 offset{std::sin(a), 0.0, std::cos(a)};
    path.push_back(Camera::make(Projection::Orthographic, center + offset, -offset, {0.0, 1.0, 0.0}, 1.0, width,
                                height, 0.0, 2.0));
  }
  return path;
}

std::vector<Camera> camera_path(const RunConfig& config) {
  if (config.path.empty()) return orbit_path(config.orbit_frames, config.out_width, config.out_height, config.seed);
  try {
    const auto bytes = read_file(config.path);
    return parse_pose_file(std::string(bytes.begin(), bytes.end()), config.out_width, config.out_height, config.path);
  } catch (const std::exception& e) {
    throw BenchError(kLoadFailure, std::string("pose file: ") + e.what());
  }
}

json config_json(const RunConfig& c) {
  return {{"scene", c.scene},
          {"layout", to_string(c.layout)},
          {"strategy", to_string(c.strategy.kind)},
          {"axis", to_string(c.strategy.axis)},
          {"levels", c.levels},
          {"capture_resolution", c.capture_resolution},
          {"out_width", c.out_width},
          {"out_height", c.out_height},
          {"technique", to_string(c.technique)},
          {"mode", to_string(c.mode)},
          {"seed", c.seed},
          {"threads", c.threads},
          {"alpha_cutoff", c.alpha_cutoff},
          {"splat_radius", c.splat_radius}};
}

json empty_report(const std::string& command, const RunConfig& config) {
  return {{"command", command},
          {"config", config_json(config)},
          {"build_ms", nullptr},
          {"capture", nullptr},
          {"pool", nullptr},
          {"strategies", json::array()},
          {"frames", json::array()},
          {"memory", json::array()}};
}

json memory_entry(Layout layout, const MemoryParams& p) {
  const MemoryReport r = memory_report(layout, p);
  return {{"layout", to_string(layout)},
          {"width", p.width},
          {"height", p.height},
          {"levels", layout == Layout::Pofl || layout == Layout::Pofa ? json(p.levels) : json(nullptr)},
          {"record_bytes", p.record_bytes},
          {"fragments", p.fragments},
          {"gbuffer_bytes_per_pixel", layout == Layout::DeferredShading ? json(p.gbuffer_bytes_per_pixel) : json(nullptr)},
          {"directory_bytes", r.directory_bytes},
          {"inner_node_bytes", r.inner_node_bytes},
          {"pool_bytes", r.pool_bytes},
          {"total_bytes", r.total_bytes()},
          {"total_mib", r.total_mib()}};
}

json strategy_counts(const Scene& scene, int resolution, Execution exec) {
  const RasterConfig cfg = capture_config(resolution);
  const double footprint = world_pixel_footprint(cfg);
  double slack = 0.0;
  for (const auto& t : scene.triangles) slack += 2.0 * t.perimeter() / footprint;

  const CaptureStrategy strategies[] = {CaptureStrategy::one_view(Axis::Z), CaptureStrategy::three_separate(),
                                        CaptureStrategy::three_way_geometry(), CaptureStrategy::normal_space()};
  json rows = json::array();
  std::uint64_t counts[4];
  for (int i = 0; i < 4; ++i) {
    const CaptureStats s = capture_pass(scene, strategies[i], cfg, [](const EmittedFragment&) {}, exec);
    counts[i] = s.fragments_emitted;
    json row = stats_json(s);
    row["strategy"] = to_string(strategies[i].kind);
    rows.push_back(row);
  }
  const auto one = static_cast<double>(counts[0]);
  const auto normal = static_cast<double>(counts[3]);
  const auto three = static_cast<double>(counts[2]);
  return {{"counts", rows},
          {"slack", slack},
          {"three_separate_equals_three_way", counts[1] == counts[2]},
          {"one_view_le_normal_space", one <= normal + slack},
          {"normal_space_le_three_way", normal <= three + slack}};
}

CommandResult cmd_build(const RunConfig& config) {
  config.validate();
  prepare_out_dir(config);
  const Scene scene = load_run_scene(config);
  json report = empty_report("build", config);
  const Built built = build_layout(scene, config);
  report["build_ms"] = built.build_ms;
  report["capture"] = stats_json(stats_of(built.fhv));
  report["pool"] = pool_json(pool_of(built.fhv));
  if (config.compare_strategies) report["strategies"] = strategy_counts(scene, config.capture_resolution, config.exec());

  const FragmentPool& pool = pool_of(built.fhv);
  MemoryParams params;
  params.width = params.height = config.capture_resolution;
  params.levels = config.levels;
  params.fragments = config.layout == Layout::Pofa ? pool.size() : pool.capacity();
  report["memory"].push_back(memory_entry(config.layout, params));

  save_snapshot(config.out_dir / "fhv.snap", built.fhv);
  write_json(config.out_dir / "build_report.json", report);
  return {report, pool.overflowed() ? kOverflowDegraded : kOk};
}

CommandResult cmd_render(const RunConfig& config) {
  config.validate();
  prepare_out_dir(config);
  json report = empty_report("render", config);
  const auto cameras = camera_path(config);
  const auto lights = default_lights();
  RenderOptions options;
  options.exec = config.exec();

  std::optional<Scene> scene;
  std::vector<Material> materials;
  const bool need_scene = config.technique == Technique::Deferred || config.snapshot.empty();
  if (need_scene) {
    scene = load_run_scene(config);
    materials = scene->materials;
  }

  if (config.technique == Technique::Deferred) {
    for (std::size_t f = 0; f < cameras.size(); ++f) {
      auto start = Clock::now();
      const GBuffer gbuffer = deferred_geometry_pass(*scene, cameras[f], options.exec);
      const double geometry_ms = elapsed_ms(start);
      start = Clock::now();
      const ImageBuffer image = deferred_lighting_pass(gbuffer, materials, cameras[f], lights, options);
      json entry{{"frame", f}, {"geometry_ms", geometry_ms}, {"eval_ms", elapsed_ms(start)}, {"raycast", nullptr}};
      write_frame(config.out_dir, static_cast<int>(f), image, entry);
      report["frames"].push_back(entry);
    }
    MemoryParams params;
    params.width = config.out_width;
    params.height = config.out_height;
    report["memory"].push_back(memory_entry(Layout::DeferredShading, params));
    write_json(config.out_dir / "render_report.json", report);
    return {report, kOk};
  }

  // FHV techniques: build (or load) once, then reuse for every frame.
  Built built;
  int exit_code = kOk;
  if (config.snapshot.empty()) {
    built = build_layout(*scene, config);
    report["capture"] = stats_json(stats_of(built.fhv));
  } else {
    const auto start = Clock::now();
    try {
      built.fhv = load_snapshot(config.snapshot);
    } catch (const std::exception& e) {
      throw BenchError(kLoadFailure, std::string("snapshot load failed: ") + e.what());
    }
    built.build_ms = elapsed_ms(start);
    if (!config.scene.empty()) {
      try {
        materials = load_run_scene(config).materials;
      } catch (const BenchError&) {
        // Materials are optional for snapshot rendering; defaults apply.
      }
    }
  }
  report["build_ms"] = built.build_ms;
  report["pool"] = pool_json(pool_of(built.fhv));
  if (pool_of(built.fhv).overflowed()) exit_code = kOverflowDegraded;

  const AnyFhv& fhv = built.fhv;
  const int res = resolution_of(fhv);
  if (config.technique == Technique::Raycast && std::holds_alternative<FhvPpfl>(fhv)) {
    throw BenchError(kIncompatible, "raycast needs an object-space layout (POFL or POFA), got PPFL");
  }

  const double footprint = capture_footprint(res);
  RaycastConfig rc;
  rc.mode = config.mode;
  rc.alpha_cutoff = config.alpha_cutoff;
  if (config.technique == Technique::Raycast) {
    rc.splat_radius_world = config.splat_radius > 0.0 ? config.splat_radius
                                                      : default_raycast_radius(footprint, levels_of(fhv));
  }
  const double splat_radius = config.splat_radius > 0.0 ? config.splat_radius : footprint;

  for (std::size_t f = 0; f < cameras.size(); ++f) {
    const auto start = Clock::now();
    ImageBuffer image;
    json raycast_stats = nullptr;
    if (config.technique == Technique::Splat) {
      image = splat_render(pool_of(fhv).records(), materials, cameras[f], lights, splat_radius, options);
    } else {
      RaycastStats stats;
      if (const auto* pofl = std::get_if<FhvPofl>(&fhv)) {
        image = raycast_render(*pofl, materials, cameras[f], lights, rc, options.exec, &stats);
      } else {
        image = raycast_render(std::get<FhvPofa>(fhv), materials, cameras[f], lights, rc, options.exec, &stats);
      }
      raycast_stats = raycast_json(stats);
    }
    json entry{{"frame", f},
               {"geometry_ms", f == 0 ? built.build_ms : 0.0},
               {"eval_ms", elapsed_ms(start)},
               {"raycast", raycast_stats}};
    write_frame(config.out_dir, static_cast<int>(f), image, entry);
    report["frames"].push_back(entry);
  }

  MemoryParams params;
  params.width = params.height = res;
  params.levels = std::max(1, levels_of(fhv));
  params.fragments = pool_of(fhv).capacity();
  report["memory"].push_back(memory_entry(layout_of(fhv), params));
  write_json(config.out_dir / "render_report.json", report);
  return {report, exit_code};
}

CommandResult cmd_report_memory(const RunConfig& config) {
  config.validate();
  prepare_out_dir(config);
  json report = empty_report("report-memory", config);
  const int res = config.capture_resolution;

  MemoryParams ds;
  ds.width = config.out_width;
  ds.height = config.out_height;
  report["memory"].push_back(memory_entry(Layout::DeferredShading, ds));

  MemoryParams ppfl;
  ppfl.width = ppfl.height = res;
  ppfl.fragments = default_capacity(res, res);
  report["memory"].push_back(memory_entry(Layout::Ppfl, ppfl));

  std::optional<Scene> scene;
  if (!config.fragments && !config.scene.empty()) scene = load_run_scene(config);
  for (int levels : {6, 7, 8}) {
    MemoryParams p = ppfl;
    p.levels = levels;
    report["memory"].push_back(memory_entry(Layout::Pofl, p));
    if (config.fragments) {
      p.fragments = *config.fragments;
    } else if (scene) {
      const RasterConfig cfg = capture_config(res);
      p.fragments = capture_pass(*scene, config.strategy, cfg, [](const EmittedFragment&) {}, config.exec())
                        .fragments_emitted;
    }
    report["memory"].push_back(memory_entry(Layout::Pofa, p));
  }
  write_json(config.out_dir / "memory_report.json", report);
  return {report, kOk};
}

CommandResult cmd_compare_strategies(const RunConfig& config) {
  config.validate();
  prepare_out_dir(config);
  const Scene scene = load_run_scene(config);
  json report = empty_report("compare-strategies", config);
  report["strategies"] = strategy_counts(scene, config.capture_resolution, config.exec());
  write_json(config.out_dir / "strategies_report.json", report);
  return {report, kOk};
}

}  // namespace fhv::bench
