// Copyright 2026 The FHV Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fhv/error.hpp"
#include "fhv/fhv.hpp"
#include "fhv/raster.hpp"
#include "fhv/raycast.hpp"
#include "fhv/scene.hpp"
#include "fhv/shading.hpp"

namespace fhv::bench {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kLoadFailure = 2,
  kOverflowDegraded = 3,
  kIncompatible = 4,
};

/// Error carrying the process exit code the driver should return.
class BenchError : public Error {
 public:
  BenchError(int code, const std::string& what) : Error(what), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

enum class Technique { Deferred, Splat, Raycast };

const char* to_string(Technique technique);
Technique parse_technique(const std::string& text);

struct RunConfig {
  std::string scene = "builtin:three-quads";  // OBJ path or builtin:<name>
  std::string materials;                      // optional material table
  double margin = 0.05;                       // normalization margin for OBJ input
  Layout layout = Layout::Pofa;
  CaptureStrategy strategy = CaptureStrategy::normal_space();
  int levels = kDefaultLevels;
  int capture_resolution = 128;
  int out_width = 256;
  int out_height = 256;
  Technique technique = Technique::Raycast;
  RaycastMode mode = RaycastMode::Transparency;
  std::string path;  // pose file; empty selects an orbit
  int orbit_frames = 3;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::filesystem::path out_dir = "fhv_out";
  std::string snapshot;  // render input; empty builds from the scene
  double alpha_cutoff = 1.0;
  double splat_radius = 0.0;  // 0 selects the default for the layout
  std::optional<std::uint32_t> capacity;
  bool compare_strategies = false;
  std::optional<std::uint64_t> fragments;  // report-memory: exact fragment count

  Execution exec() const { return {threads}; }
  /// Throws BenchError(kUsage) on out-of-range values.
  void validate() const;
};

/// "builtin:<name>" or an OBJ file; files are normalized into the unit cube.
Scene load_run_scene(const RunConfig& config);

/// Key light plus ambient term used by every technique.
std::vector<Light> default_lights();

/// One "eye(3) dir(3) up(3) fov" line per frame. fov > 0 is a perspective
/// field of view in degrees; fov < 0 selects orthographic with extent -fov.
/// Blank lines and '#' comments are skipped.
std::vector<Camera> parse_pose_file(const std::string& text, int width, int height,
                                    const std::string& source = "<poses>");

/// Orthographic orbit about the cube center in the xz plane. Frame 0 looks
/// down -z unless `seed` is nonzero, which rotates the start angle.
std::vector<Camera> orbit_path(int frames, int width, int height, std::uint64_t seed);

std::vector<Camera> camera_path(const RunConfig& config);

struct CommandResult {
  nlohmann::json report;
  int exit_code = kOk;
};

/// Builds the configured layout, writes `fhv.snap` and `build_report.json`.
CommandResult cmd_build(const RunConfig& config);
/// Renders every pose, writes frame_NNN.ppm / .rgba32f and `render_report.json`.
CommandResult cmd_render(const RunConfig& config);
/// DS at the output resolution, PPFL at the capture resolution, POFL/POFA at
/// L in {6, 7, 8}. Writes `memory_report.json`.
CommandResult cmd_report_memory(const RunConfig& config);
/// Fragment counts for all four capture strategies. Writes `strategies_report.json`.
CommandResult cmd_compare_strategies(const RunConfig& config);

nlohmann::json strategy_counts(const Scene& scene, int resolution, Execution exec);
nlohmann::json memory_entry(Layout layout, const MemoryParams& params);
nlohmann::json config_json(const RunConfig& config);
/// Report skeleton with every declared field present.
nlohmann::json empty_report(const std::string& command, const RunConfig& config);

}  // namespace fhv::bench
