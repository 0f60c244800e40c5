// Copyright 2026 The FHV Authors
// SPDX-License-Identifier: Apache-2.0

// fhv_cli: build fragment-history volumes, render camera paths and report
// memory use.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "fhv/bench.hpp"

namespace {

using fhv::bench::BenchError;
using fhv::bench::RunConfig;

struct Flags {
  std::string scene = "builtin:three-quads";
  std::string materials;
  double margin = 0.05;
  std::string layout = "pofa";
  std::string strategy = "normal";
  int levels = fhv::kDefaultLevels;
  int capture_res = 128;
  std::string out_res;  // empty: match the capture resolution
  std::string technique = "raycast";
  std::string mode = "transparency";
  std::string path;
  int orbit = 3;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string out_dir = "fhv_out";
  std::string snapshot;
  double alpha_cutoff = 1.0;
  double splat_radius = 0.0;
  std::optional<std::uint32_t> capacity;
  std::optional<std::uint64_t> fragments;
  bool compare = false;
};

void parse_resolution(const std::string& text, int& w, int& h) {
  const auto x = text.find_first_of("xX");
  try {
    if (x == std::string::npos) {
      w = h = std::stoi(text);
    } else {
      w = std::stoi(text.substr(0, x));
      h = std::stoi(text.substr(x + 1));
    }
  } catch (const std::exception&) {
    throw BenchError(fhv::bench::kUsage, "bad resolution '" + text + "'");
  }
}

RunConfig to_config(const Flags& f) {
  RunConfig c;
  c.scene = f.scene;
  c.materials = f.materials;
  c.margin = f.margin;
  c.levels = f.levels;
  c.capture_resolution = f.capture_res;
  if (f.out_res.empty()) {
    c.out_width = c.out_height = f.capture_res;
  } else {
    parse_resolution(f.out_res, c.out_width, c.out_height);
  }
  c.path = f.path;
  c.orbit_frames = f.orbit;
  c.seed = f.seed;
  c.threads = f.threads;
  c.out_dir = f.out_dir;
  c.snapshot = f.snapshot;
  c.alpha_cutoff = f.alpha_cutoff;
  c.splat_radius = f.splat_radius;
  c.capacity = f.capacity;
  c.fragments = f.fragments;
  c.compare_strategies = f.compare;
  try {
    c.layout = fhv::parse_layout(f.layout);
    c.strategy = fhv::parse_strategy(f.strategy);
    c.technique = fhv::bench::parse_technique(f.technique);
    c.mode = fhv::parse_raycast_mode(f.mode);
  } catch (const BenchError&) {
    throw;
  } catch (const fhv::Error& e) {
    throw BenchError(fhv::bench::kUsage, e.what());
  }
  return c;
}

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--scene", f.scene, "OBJ file or builtin:<three-quads|icosphere|edge-on-plane|cornell-box>");
  app->add_option("--materials", f.materials, "material table for OBJ input");
  app->add_option("--margin", f.margin, "normalization margin for OBJ input");
  app->add_option("--layout", f.layout, "ppfl | pofl | pofa");
  app->add_option("--strategy", f.strategy, "one-view[:x|y|z] | three-separate | three-way | normal");
  app->add_option("--levels", f.levels, "octree levels");
  app->add_option("--capture-res", f.capture_res, "capture resolution");
  app->add_option("--threads", f.threads, "worker threads (1 = deterministic)")->envname("FHV_THREADS");
  app->add_option("--out-dir", f.out_dir, "output directory");
  app->add_option("--seed", f.seed, "orbit phase seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fragment-history volume builder and renderer"};
  app.set_config("--config", "", "TOML/INI file; keys match the flags, one [subcommand] section each");
  app.require_subcommand(1);
  Flags f;

  auto* build = app.add_subcommand("build", "capture a scene into an FHV snapshot");
  add_common(build, f);
  build->add_option("--capacity", f.capacity, "fragment pool capacity (PPFL/POFL)");
  build->add_flag("--compare-strategies", f.compare, "also count fragments for all capture strategies");

  auto* render = app.add_subcommand("render", "render a camera path");
  add_common(render, f);
  render->add_option("--snapshot", f.snapshot, "render from a saved snapshot instead of building");
  render->add_option("--capacity", f.capacity, "fragment pool capacity (PPFL/POFL)");
  render->add_option("--out-res", f.out_res, "WxH or N (default: capture resolution)");
  render->add_option("--technique", f.technique, "deferred | splat | raycast");
  render->add_option("--mode", f.mode, "opaque | transparency | shadows");
  render->add_option("--path", f.path, "pose file: one 'eye dir up fov' line per frame");
  render->add_option("--orbit", f.orbit, "orbit frame count when no pose file is given");
  render->add_option("--alpha-cutoff", f.alpha_cutoff, "early-termination opacity (>1 disables)");
  render->add_option("--splat-radius", f.splat_radius, "world-space fragment radius (0 = default)");

  auto* memory = app.add_subcommand("report-memory", "memory accounting for DS/PPFL/POFL/POFA");
  add_common(memory, f);
  memory->add_option("--out-res", f.out_res, "deferred-shading resolution, WxH or N");
  memory->add_option("--fragments", f.fragments, "exact POFA fragment count (default: capture the scene)");

  auto* compare = app.add_subcommand("compare-strategies", "fragment counts per capture strategy");
  add_common(compare, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : fhv::bench::kUsage;
  }

  if (memory->parsed()) {
    if (memory->count("--capture-res") == 0) f.capture_res = 1000;
    if (memory->count("--out-res") == 0) f.out_res = "1280x720";
  }

  try {
    const RunConfig config = to_config(f);
    fhv::bench::CommandResult result;
    if (build->parsed()) {
      result = fhv::bench::cmd_build(config);
    } else if (render->parsed()) {
      result = fhv::bench::cmd_render(config);
    } else if (memory->parsed()) {
      result = fhv::bench::cmd_report_memory(config);
    } else {
      result = fhv::bench::cmd_compare_strategies(config);
    }
    std::cout << result.report.dump(2) << '\n';
    if (result.exit_code == fhv::bench::kOverflowDegraded) {
      std::cerr << "warning: fragment pool overflowed; build is degraded\n";
    }
    return result.exit_code;
  } catch (const BenchError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return fhv::bench::kUsage;
  }
}
