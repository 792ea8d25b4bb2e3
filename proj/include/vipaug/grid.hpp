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

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vipaug/errors.hpp"

namespace vipaug {

// (height, width, channels) of a rank-3 grid. Row-major with the channel
// index varying fastest, i.e. interleaved HWC.
struct Shape {
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t channels = 0;

  [[nodiscard]] constexpr std::size_t size() const {
    return height * width * channels;
  }
  [[nodiscard]] constexpr bool empty() const { return size() == 0; }
  [[nodiscard]] constexpr std::size_t index(std::size_t x, std::size_t y,
                                            std::size_t z) const {
    return (x * width + y) * channels + z;
  }

  friend constexpr bool operator==(const Shape&, const Shape&) = default;
};

inline std::string to_string(const Shape& s) {
  return std::to_string(s.height) + "x" + std::to_string(s.width) + "x" +
         std::to_string(s.channels);
}

inline void require_valid_shape(const Shape& s) {
  if (s.height == 0 || s.width == 0 || s.channels == 0) {
    throw InvalidShape("grid dimensions must be positive, got " +
                       to_string(s));
  }
}

inline void require_same_shape(const Shape& a, const Shape& b,
                               const char* what) {
  if (a != b) {
    throw ShapeMismatch(std::string(what) + ": shape " + to_string(a) +
                        " does not match " + to_string(b));
  }
}

// Dense H x W x C grid of values.
template <typename T>
class Grid {
 public:
  using value_type = T;

  Grid() = default;
  explicit Grid(Shape shape, T fill = T{})
      : shape_(shape), data_(shape.size(), fill) {}
  Grid(Shape shape, std::vector<T> data)
      : shape_(shape), data_(std::move(data)) {
    if (data_.size() != shape_.size()) {
      throw InvalidShape("data length " + std::to_string(data_.size()) +
                         " does not match shape " + to_string(shape_));
    }
  }

  [[nodiscard]] const Shape& shape() const { return shape_; }
  [[nodiscard]] std::size_t height() const { return shape_.height; }
  [[nodiscard]] std::size_t width() const { return shape_.width; }
  [[nodiscard]] std::size_t channels() const { return shape_.channels; }
  [[nodiscard]] std::size_t size() const { return data_.size(); }

  T& operator()(std::size_t x, std::size_t y, std::size_t z) {
    return data_[shape_.index(x, y, z)];
  }
  const T& operator()(std::size_t x, std::size_t y, std::size_t z) const {
    return data_[shape_.index(x, y, z)];
  }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  [[nodiscard]] std::span<T> values() { return data_; }
  [[nodiscard]] std::span<const T> values() const { return data_; }
  [[nodiscard]] const std::vector<T>& data() const { return data_; }

  auto begin() { return data_.begin(); }
  auto end() { return data_.end(); }
  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  Shape shape_;
  std::vector<T> data_;
};

using RealGrid = Grid<double>;

// Spatial-domain image. Pixel values are expected in [0, 1] after ingestion
// but the type only enforces finiteness; intermediate images produced by
// realification may leave the unit range before clamping.
class ImageTensor {
 public:
  ImageTensor() = default;
  explicit ImageTensor(Shape shape, double fill = 0.0)
      : pixels_(checked(shape), fill) {}
  ImageTensor(Shape shape, std::vector<double> data)
      : pixels_(checked(shape), std::move(data)) {
    for (double v : pixels_) {
      if (!std::isfinite(v)) throw InvalidInput("image contains non-finite value");
    }
  }
  explicit ImageTensor(RealGrid grid) : ImageTensor(grid.shape(), grid.data()) {}

  [[nodiscard]] const Shape& shape() const { return pixels_.shape(); }
  [[nodiscard]] std::size_t height() const { return pixels_.height(); }
  [[nodiscard]] std::size_t width() const { return pixels_.width(); }
  [[nodiscard]] std::size_t channels() const { return pixels_.channels(); }
  [[nodiscard]] std::size_t size() const { return pixels_.size(); }

  double& operator()(std::size_t x, std::size_t y, std::size_t z) {
    return pixels_(x, y, z);
  }
  double operator()(std::size_t x, std::size_t y, std::size_t z) const {
    return pixels_(x, y, z);
  }
  double& operator[](std::size_t i) { return pixels_[i]; }
  double operator[](std::size_t i) const { return pixels_[i]; }

  [[nodiscard]] const RealGrid& grid() const { return pixels_; }
  [[nodiscard]] std::span<const double> values() const {
    return pixels_.values();
  }
  [[nodiscard]] std::span<double> values() { return pixels_.values(); }

  friend bool operator==(const ImageTensor&, const ImageTensor&) = default;

 private:
  static Shape checked(Shape s) {
    require_valid_shape(s);
    return s;
  }

  RealGrid pixels_;
};

// Clamps every pixel into [0, 1].
inline ImageTensor clamp_unit(ImageTensor image) {
  for (double& v : image.values()) v = std::fmin(1.0, std::fmax(0.0, v));
  return image;
}

}  // namespace vipaug
