// Copyright 2026 The FHV Authors
// SPDX-License-Identifier: Apache-2.0

#include "fhv/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <span>
#include <string>

#include "fhv/error.hpp"

namespace fhv {
namespace {

constexpr char kMagic[4] = {'F', 'H', 'V', '1'};

class Writer {
 public:
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void bytes(const std::uint8_t* p, std::size_t n) { out_.insert(out_.end(), p, p + n); }

  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& in) : in_(in) {}

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{in_[pos_++]} << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t{in_[pos_++]} << (8 * i);
    return v;
  }
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  float f32() { return std::bit_cast<float>(u32()); }
  void bytes(std::uint8_t* p, std::size_t n) {
    need(n);
    std::memcpy(p, in_.data() + pos_, n);
    pos_ += n;
  }
  bool done() const { return pos_ == in_.size(); }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) throw Error("snapshot: unexpected end of data");
  }

  const std::vector<std::uint8_t>& in_;
  std::size_t pos_ = 0;
};

void write_record(Writer& w, const FragmentRecord& r) {
  for (float v : r.position) w.f32(v);
  for (float v : r.normal) w.f32(v);
  w.u32(r.material_id);
  w.u32(r.object_id);
  w.i32(r.prev_index);
}

FragmentRecord read_record(Reader& rd) {
  FragmentRecord r;
  for (float& v : r.position) v = rd.f32();
  for (float& v : r.normal) v = rd.f32();
  r.material_id = rd.u32();
  r.object_id = rd.u32();
  r.prev_index = rd.i32();
  return r;
}

void write_pyramid(Writer& w, const OccupancyPyramid& p) {
  for (const auto& level : p.raw()) w.bytes(level.data(), level.size());
}

OccupancyPyramid read_pyramid(Reader& rd, int levels) {
  OccupancyPyramid p(levels);
  for (auto& level : p.raw()) rd.bytes(level.data(), level.size());
  return p;
}

FragmentPool read_pool(Reader& rd, std::uint64_t count) {
  if (count > std::numeric_limits<std::int32_t>::max() || count * kPackedRecordBytes > rd.remaining()) {
    throw Error("snapshot: fragment count exceeds the data");
  }
  FragmentPool pool(static_cast<std::uint32_t>(count));
  for (std::uint32_t i = 0; i < count; ++i) pool[i] = read_record(rd);
  pool.set_stored(static_cast<std::uint32_t>(count));
  return pool;
}

// Chain links must point backwards into the stored pool so walks terminate.
void check_link(std::int32_t index, std::uint64_t bound) {
  if (index < kNoFragment || (index >= 0 && static_cast<std::uint64_t>(index) >= bound)) {
    throw Error("snapshot: fragment index out of range");
  }
}

void check_chains(std::span<const std::int32_t> heads, const FragmentPool& pool) {
  for (auto h : heads) check_link(h, pool.size());
  for (std::uint32_t i = 0; i < pool.size(); ++i) check_link(pool[i].prev_index, i);
}

void check_directory_size(const Reader& rd, std::uint64_t entries, std::uint64_t bytes_per_entry) {
  if (entries > rd.remaining() / bytes_per_entry) throw Error("snapshot: directory exceeds the data");
}

}  // namespace

Layout layout_of(const AnyFhv& fhv) {
  switch (fhv.index()) {
    case 0: return Layout::Ppfl;
    case 1: return Layout::Pofl;
    default: return Layout::Pofa;
  }
}

std::vector<std::uint8_t> encode_snapshot(const AnyFhv& any) {
  Writer w;
  w.bytes(reinterpret_cast<const std::uint8_t*>(kMagic), 4);
  std::visit([&w](const auto& fhv) {
    using T = std::decay_t<decltype(fhv)>;
    const auto records = fhv.pool.records();
    if constexpr (std::is_same_v<T, FhvPpfl>) {
      w.u32(1);
      w.u32(0);
      w.u32(static_cast<std::uint32_t>(fhv.directory.width));
      w.u32(static_cast<std::uint32_t>(fhv.directory.height));
      w.u32(kPackedRecordBytes);
      w.u64(records.size());
      for (auto h : fhv.directory.heads) w.i32(h);
    } else {
      w.u32(std::is_same_v<T, FhvPofl> ? 2 : 3);
      w.u32(static_cast<std::uint32_t>(fhv.levels()));
      w.u32(static_cast<std::uint32_t>(fhv.capture_resolution));
      w.u32(static_cast<std::uint32_t>(fhv.capture_resolution));
      w.u32(kPackedRecordBytes);
      w.u64(records.size());
      if constexpr (std::is_same_v<T, FhvPofl>) {
        for (auto h : fhv.directory.heads) w.i32(h);
      } else {
        for (auto o : fhv.directory.offsets) w.u32(o);
        for (auto c : fhv.directory.counts) w.u32(c);
      }
      write_pyramid(w, fhv.pyramid);
    }
    for (const auto& r : records) write_record(w, r);
  }, any);
  return w.take();
}

AnyFhv decode_snapshot(const std::vector<std::uint8_t>& bytes) {
  Reader rd(bytes);
  std::uint8_t magic[4];
  rd.bytes(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) throw Error("snapshot: bad magic");
  const std::uint32_t tag = rd.u32();
  const auto levels = static_cast<int>(rd.u32());
  const auto width = static_cast<int>(rd.u32());
  const auto height = static_cast<int>(rd.u32());
  if (rd.u32() != kPackedRecordBytes) throw Error("snapshot: unsupported record size");
  const std::uint64_t count = rd.u64();
  if (tag != 1 && (levels < 1 || levels > 10)) throw Error("snapshot: octree levels outside [1, 10]");

  AnyFhv out;
  if (tag == 1) {
    FhvPpfl fhv;
    if (width < 1 || height < 1) throw Error("snapshot: bad resolution");
    check_directory_size(rd, std::uint64_t(width) * std::uint64_t(height), 4);
    fhv.directory = PixelDirectory(width, height);
    for (auto& h : fhv.directory.heads) h = rd.i32();
    fhv.pool = read_pool(rd, count);
    check_chains(fhv.directory.heads, fhv.pool);
    out = std::move(fhv);
  } else if (tag == 2) {
    FhvPofl fhv;
    fhv.capture_resolution = width;
    check_directory_size(rd, leaf_count(levels), 4);
    fhv.directory = LeafHeads(levels);
    for (auto& h : fhv.directory.heads) h = rd.i32();
    fhv.pyramid = read_pyramid(rd, levels);
    fhv.pool = read_pool(rd, count);
    check_chains(fhv.directory.heads, fhv.pool);
    out = std::move(fhv);
  } else if (tag == 3) {
    FhvPofa fhv;
    fhv.capture_resolution = width;
    check_directory_size(rd, leaf_count(levels), 8);
    fhv.directory = LeafRanges(levels);
    for (auto& o : fhv.directory.offsets) o = rd.u32();
    for (auto& c : fhv.directory.counts) c = rd.u32();
    fhv.pyramid = read_pyramid(rd, levels);
    fhv.pool = read_pool(rd, count);
    for (std::size_t m = 0; m < fhv.directory.offsets.size(); ++m) {
      if (std::uint64_t{fhv.directory.offsets[m]} + fhv.directory.counts[m] > count) {
        throw Error("snapshot: leaf range outside the pool");
      }
    }
    out = std::move(fhv);
  } else {
    throw Error("snapshot: unknown layout tag " + std::to_string(tag));
  }
  if (!rd.done()) throw Error("snapshot: trailing bytes");
  return out;
}

void save_snapshot(const std::filesystem::path& path, const AnyFhv& fhv) {
  const auto bytes = encode_snapshot(fhv);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write snapshot " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

AnyFhv load_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open snapshot " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_snapshot(bytes);
}

}  // namespace fhv
