// Copyright 2026 The vipaug Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "vipaug/grid.hpp"
#include "vipaug/pixel_ops.hpp"
#include "vipaug/rng.hpp"
#include "vipaug/spectrum.hpp"

namespace vipaug {

struct PoolEntry {
  std::string path;  // relative to the pool directory
  RealGrid phase;

  friend bool operator==(const PoolEntry&, const PoolEntry&) = default;
};

// Classless replacement-image pool with cached phase spectra. Immutable after
// construction.
class FractalPool {
 public:
  FractalPool(Shape canonical_shape, DftMode mode, std::vector<PoolEntry> entries)
      : shape_(canonical_shape), mode_(mode), entries_(std::move(entries)) {
    require_valid_shape(shape_);
    for (const auto& e : entries_) {
      require_same_shape(e.phase.shape(), shape_, "pool entry");
      require_principal_phase(e.phase, "pool entry");
    }
  }

  [[nodiscard]] const Shape& canonical_shape() const { return shape_; }
  [[nodiscard]] DftMode dft_mode() const { return mode_; }
  [[nodiscard]] std::size_t count() const { return entries_.size(); }
  [[nodiscard]] bool empty() const { return entries_.empty(); }
  [[nodiscard]] const PoolEntry& entry(std::size_t i) const { return entries_.at(i); }
  [[nodiscard]] const std::vector<PoolEntry>& entries() const { return entries_; }

  friend bool operator==(const FractalPool&, const FractalPool&) = default;

 private:
  Shape shape_;
  DftMode mode_;
  std::vector<PoolEntry> entries_;
};

// Decodes an image file into `channels` channels with values in [0, 1], or
// returns nullopt if the file cannot be decoded.
using ImageDecoder =
    std::function<std::optional<ImageTensor>(const std::filesystem::path&, std::size_t channels)>;

using WarningSink = std::function<void(const std::string&)>;

inline void warn_stderr(const std::string& msg) { std::cerr << "warning: " << msg << '\n'; }

// Centre-crops to the canonical aspect ratio, then bilinearly resizes.
inline ImageTensor to_canonical(const ImageTensor& image, const Shape& shape) {
  require_same_shape(Shape{1, 1, image.channels()}, Shape{1, 1, shape.channels},
                     "pool image channels");
  return resize_bilinear(center_crop_to_aspect(image, shape.height, shape.width),
                         shape.height, shape.width);
}

inline RealGrid pool_phase(const ImageTensor& image, const Shape& shape, DftMode mode) {
  return polar_spectrum(to_canonical(image, shape), mode).phase;
}

// Builds a pool from already decoded images, keeping the given order.
inline FractalPool build_pool(const std::vector<std::pair<std::string, ImageTensor>>& images,
                              const Shape& shape, DftMode mode) {
  std::vector<PoolEntry> entries;
  entries.reserve(images.size());
  for (const auto& [name, img] : images) entries.push_back({name, pool_phase(img, shape, mode)});
  return FractalPool(shape, mode, std::move(entries));
}

// Every regular file in `directory`, sorted by filename. Files the decoder
// rejects are skipped with a warning; it is an error if none decode.
inline FractalPool build_pool(const std::filesystem::path& directory, const Shape& shape,
                              DftMode mode, const ImageDecoder& decode,
                              const WarningSink& warn = warn_stderr) {
  require_valid_shape(shape);
  std::error_code ec;
  if (!std::filesystem::is_directory(directory, ec)) {
    throw IoError("pool directory '" + directory.string() + "' does not exist");
  }
  std::vector<std::string> names;
  for (const auto& item : std::filesystem::directory_iterator(directory)) {
    if (item.is_regular_file()) names.push_back(item.path().filename().string());
  }
  std::sort(names.begin(), names.end());
  if (names.empty()) throw IoError("pool directory '" + directory.string() + "' is empty");

  std::vector<PoolEntry> entries;
  for (const auto& name : names) {
    std::optional<ImageTensor> img = decode(directory / name, shape.channels);
    if (!img) {
      warn("skipping undecodable pool file '" + name + "'");
      continue;
    }
    entries.push_back({name, pool_phase(*img, shape, mode)});
  }
  if (entries.empty()) {
    throw IoError("no decodable images in pool directory '" + directory.string() + "'");
  }
  return FractalPool(shape, mode, std::move(entries));
}

struct PoolSample {
  std::size_t index;
  const RealGrid& phase;
};

// Uniform choice of one cached entry.
inline PoolSample sample_phase(const FractalPool& pool, RngStream& rng) {
  if (pool.empty()) throw InvalidInput("cannot sample from an empty pool");
  const auto i = static_cast<std::size_t>(rng.uniform_index(pool.count()));
  return {i, pool.entry(i).phase};
}

// Cache file layout, all integers little-endian:
//   "VIPF" | u16 version | u32 H | u32 W | u32 C
//   then per entry: u32 path byte length | UTF-8 path | H*W*C f64 phases
// Entries run to end of file. The DFT mode is not recorded; the reader
// supplies it.
inline constexpr std::array<char, 4> kPoolMagic = {'V', 'I', 'P', 'F'};
inline constexpr std::uint16_t kPoolVersion = 1;

namespace detail {

template <typename T>
void put_le(std::ostream& out, T value) {
  using U = std::make_unsigned_t<T>;
  auto u = static_cast<U>(value);
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.put(static_cast<char>(u & 0xFF));
    u = static_cast<U>(u >> 8);
  }
}

template <typename T>
bool get_le(std::istream& in, T& value) {
  std::array<unsigned char, sizeof(T)> buf{};
  if (!in.read(reinterpret_cast<char*>(buf.data()), sizeof(T))) return false;
  std::uint64_t u = 0;
  for (std::size_t i = sizeof(T); i-- > 0;) u = (u << 8) | buf[i];
  value = static_cast<T>(u);
  return true;
}

inline std::uint32_t to_u32(std::size_t v, const char* what) {
  if (v > 0xFFFFFFFFu) throw InvalidInput(std::string(what) + " too large for cache");
  return static_cast<std::uint32_t>(v);
}

}  // namespace detail

inline void write_pool_cache(const FractalPool& pool, std::ostream& out) {
  out.write(kPoolMagic.data(), kPoolMagic.size());
  detail::put_le<std::uint16_t>(out, kPoolVersion);
  const Shape& s = pool.canonical_shape();
  detail::put_le<std::uint32_t>(out, detail::to_u32(s.height, "height"));
  detail::put_le<std::uint32_t>(out, detail::to_u32(s.width, "width"));
  detail::put_le<std::uint32_t>(out, detail::to_u32(s.channels, "channels"));
  for (const auto& e : pool.entries()) {
    detail::put_le<std::uint32_t>(out, detail::to_u32(e.path.size(), "path"));
    out.write(e.path.data(), static_cast<std::streamsize>(e.path.size()));
    for (double p : e.phase) detail::put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(p));
  }
  if (!out) throw IoError("failed writing pool cache");
}

inline FractalPool read_pool_cache(std::istream& in, DftMode mode) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kPoolMagic) {
    throw IoError("not a pool cache (bad magic)");
  }
  std::uint16_t version = 0;
  std::uint32_t h = 0, w = 0, c = 0;
  if (!detail::get_le(in, version) || !detail::get_le(in, h) || !detail::get_le(in, w) ||
      !detail::get_le(in, c)) {
    throw IoError("truncated pool cache header");
  }
  if (version != kPoolVersion) {
    throw IoError("unsupported pool cache version " + std::to_string(version));
  }
  const Shape shape{h, w, c};
  require_valid_shape(shape);
  std::vector<PoolEntry> entries;
  while (in.peek() != std::char_traits<char>::eof()) {
    std::uint32_t len = 0;
    if (!detail::get_le(in, len)) throw IoError("truncated pool cache entry");
    std::string path(len, '\0');
    if (!in.read(path.data(), len)) throw IoError("truncated pool cache path");
    std::vector<double> phase(shape.size());
    for (double& p : phase) {
      std::uint64_t bits = 0;
      if (!detail::get_le(in, bits)) throw IoError("truncated pool cache phase grid");
      p = std::bit_cast<double>(bits);
    }
    entries.push_back({std::move(path), RealGrid(shape, std::move(phase))});
  }
  if (entries.empty()) throw IoError("pool cache holds no entries");
  return FractalPool(shape, mode, std::move(entries));
}

}  // namespace vipaug
