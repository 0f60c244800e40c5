// Copyright 2026 The FHV Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <vector>

namespace fhv {

using Rgba = std::array<float, 4>;

/// Linear RGBA raster with per-pixel depth and the object id of the
/// front-most contribution (-1 where nothing was drawn).
struct ImageBuffer {
  int width = 0;
  int height = 0;
  std::vector<Rgba> pixels;
  std::vector<double> depth;
  std::vector<std::int32_t> object_ids;

  ImageBuffer() = default;
  ImageBuffer(int width, int height, Rgba background = {0.0f, 0.0f, 0.0f, 0.0f});

  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }
  Rgba& at(int x, int y) { return pixels[index(x, y)]; }
  const Rgba& at(int x, int y) const { return pixels[index(x, y)]; }
};

std::uint8_t srgb_encode_8bit(float linear);

/// Binary P6, 8-bit sRGB-encoded RGB.
std::vector<std::uint8_t> encode_ppm(const ImageBuffer& image);
/// u32 width, u32 height, then width*height RGBA f32, all little-endian.
std::vector<std::uint8_t> encode_float_dump(const ImageBuffer& image);
ImageBuffer decode_float_dump(const std::vector<std::uint8_t>& bytes);

void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> read_file(const std::filesystem::path& path);

}  // namespace fhv
