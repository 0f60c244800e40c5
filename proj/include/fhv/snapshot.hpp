// Copyright 2026 The FHV Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <variant>
#include <vector>

#include "fhv/fhv.hpp"

namespace fhv {

using AnyFhv = std::variant<FhvPpfl, FhvPofl, FhvPofa>;

Layout layout_of(const AnyFhv& fhv);

// Little-endian snapshot layout:
//   "FHV1" | u32 layout tag (1 PPFL, 2 POFL, 3 POFA) | u32 levels
//   | u32 width | u32 height | u32 record bytes (36) | u64 fragment count
//   | directories | packed 36-byte records
// Directories: PPFL i32 heads[width*height]; POFL i32 heads[8^L] followed by
// the occupancy masks level 0..L-1; POFA u32 offsets[8^L], u32 counts[8^L]
// followed by the occupancy masks. Only stored records are written, so a
// loaded pool has capacity == size.
std::vector<std::uint8_t> encode_snapshot(const AnyFhv& fhv);
AnyFhv decode_snapshot(const std::vector<std::uint8_t>& bytes);

void save_snapshot(const std::filesystem::path& path, const AnyFhv& fhv);
AnyFhv load_snapshot(const std::filesystem::path& path);

}  // namespace fhv
