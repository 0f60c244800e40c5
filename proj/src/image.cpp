// Copyright 2026 The FHV Authors
// SPDX-License-Identifier: Apache-2.0

#include "fhv/image.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#include "fhv/error.hpp"

namespace fhv {

ImageBuffer::ImageBuffer(int w, int h, Rgba background)
    : width(w),
      height(h),
      pixels(static_cast<std::size_t>(w) * h, background),
      depth(static_cast<std::size_t>(w) * h, std::numeric_limits<double>::infinity()),
      object_ids(static_cast<std::size_t>(w) * h, -1) {
  if (w < 1 || h < 1) throw Error("ImageBuffer: resolution must be at least 1x1");
}

std::uint8_t srgb_encode_8bit(float linear) {
  const double c = std::clamp(static_cast<double>(linear), 0.0, 1.0);
  const double s = c <= 0.0031308 ? 12.92 * c : 1.055 * std::pow(c, 1.0 / 2.4) - 0.055;
  return static_cast<std::uint8_t>(std::lround(s * 255.0));
}

std::vector<std::uint8_t> encode_ppm(const ImageBuffer& image) {
  const std::string header = "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + image.pixels.size() * 3);
  for (const auto& p : image.pixels) {
    for (int c = 0; c < 3; ++c) out.push_back(srgb_encode_8bit(p[c]));
  }
  return out;
}

std::vector<std::uint8_t> encode_float_dump(const ImageBuffer& image) {
  std::vector<std::uint8_t> out;
  out.reserve(8 + image.pixels.size() * 16);
  auto put = [&out](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  };
  put(static_cast<std::uint32_t>(image.width));
  put(static_cast<std::uint32_t>(image.height));
  for (const auto& p : image.pixels) {
    for (float c : p) put(std::bit_cast<std::uint32_t>(c));
  }
  return out;
}

ImageBuffer decode_float_dump(const std::vector<std::uint8_t>& bytes) {
  std::size_t pos = 0;
  auto get = [&]() {
    if (bytes.size() - pos < 4) throw Error("float dump: unexpected end of data");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{bytes[pos++]} << (8 * i);
    return v;
  };
  const auto w = static_cast<int>(get());
  const auto h = static_cast<int>(get());
  ImageBuffer image(w, h);
  for (auto& p : image.pixels) {
    for (float& c : p) c = std::bit_cast<float>(get());
  }
  if (pos != bytes.size()) throw Error("float dump: trailing bytes");
  return image;
}

void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace fhv
