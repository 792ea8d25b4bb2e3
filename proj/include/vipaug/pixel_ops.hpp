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

// Spatial-domain image operations: the pixel-op vocabulary of the t stage and
// the crop/resize used to bring pool images to a canonical shape.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "vipaug/grid.hpp"

namespace vipaug {

// An enabled pixel op and the closed range its magnitude is drawn from.
struct PixelOpSpec {
  std::string name;
  double min = 0.0;
  double max = 0.0;

  friend bool operator==(const PixelOpSpec&, const PixelOpSpec&) = default;
};

inline constexpr std::array<std::string_view, 9> kPixelOpNames = {
    "identity", "rotate",   "translate_x", "translate_y", "shear_x",
    "shear_y",  "solarize", "posterize",   "equalize"};

inline bool is_known_pixel_op(std::string_view name) {
  return std::find(kPixelOpNames.begin(), kPixelOpNames.end(), name) !=
         kPixelOpNames.end();
}

// Rotation in degrees, translations as a fraction of the image extent, shear
// as a slope, solarize threshold on the unit range, posterize bit depth.
inline std::vector<PixelOpSpec> default_pixel_ops() {
  return {{"rotate", -15.0, 15.0},   {"translate_x", -0.2, 0.2},
          {"translate_y", -0.2, 0.2}, {"shear_x", -0.2, 0.2},
          {"shear_y", -0.2, 0.2},    {"solarize", 0.0, 1.0},
          {"posterize", 4.0, 8.0},   {"equalize", 0.0, 0.0},
          {"identity", 0.0, 0.0}};
}

inline constexpr double kFillValue = 0.5;

// Bilinear sample at fractional (row, col). Neighbours outside the image
// contribute kFillValue with their interpolation weight.
inline double sample_bilinear(const ImageTensor& img, double row, double col,
                              std::size_t z) {
  const double r0 = std::floor(row);
  const double c0 = std::floor(col);
  const double fr = row - r0;
  const double fc = col - c0;
  const auto at = [&](double r, double c) {
    if (r < 0 || c < 0 || r >= static_cast<double>(img.height()) ||
        c >= static_cast<double>(img.width())) {
      return kFillValue;
    }
    return img(static_cast<std::size_t>(r), static_cast<std::size_t>(c), z);
  };
  double v = 0.0;
  if ((1 - fr) * (1 - fc) != 0.0) v += (1 - fr) * (1 - fc) * at(r0, c0);
  if ((1 - fr) * fc != 0.0) v += (1 - fr) * fc * at(r0, c0 + 1);
  if (fr * (1 - fc) != 0.0) v += fr * (1 - fc) * at(r0 + 1, c0);
  if (fr * fc != 0.0) v += fr * fc * at(r0 + 1, c0 + 1);
  return v;
}

// Resamples with an inverse map: output (row, col) reads the source at
// src(row - cr, col - cc) + (cr, cc), coordinates relative to the centre.
template <typename InverseMap>
ImageTensor warp(const ImageTensor& img, InverseMap&& src) {
  ImageTensor out(img.shape());
  const double cr = (static_cast<double>(img.height()) - 1.0) / 2.0;
  const double cc = (static_cast<double>(img.width()) - 1.0) / 2.0;
  for (std::size_t x = 0; x < img.height(); ++x) {
    for (std::size_t y = 0; y < img.width(); ++y) {
      const auto [dr, dc] = src(static_cast<double>(x) - cr, static_cast<double>(y) - cc);
      for (std::size_t z = 0; z < img.channels(); ++z) {
        out(x, y, z) = sample_bilinear(img, dr + cr, dc + cc, z);
      }
    }
  }
  return out;
}

inline ImageTensor rotate(const ImageTensor& img, double degrees) {
  const double t = degrees * std::numbers::pi / 180.0;
  const double c = std::cos(t);
  const double s = std::sin(t);
  return warp(img, [c, s](double r, double col) {
    return std::pair{c * r - s * col, s * r + c * col};
  });
}

// Horizontal shift by `fraction` of the width (positive moves content right).
inline ImageTensor translate_x(const ImageTensor& img, double fraction) {
  const double d = fraction * static_cast<double>(img.width());
  return warp(img, [d](double r, double c) { return std::pair{r, c - d}; });
}

inline ImageTensor translate_y(const ImageTensor& img, double fraction) {
  const double d = fraction * static_cast<double>(img.height());
  return warp(img, [d](double r, double c) { return std::pair{r - d, c}; });
}

inline ImageTensor shear_x(const ImageTensor& img, double slope) {
  return warp(img, [slope](double r, double c) { return std::pair{r, c + slope * r}; });
}

inline ImageTensor shear_y(const ImageTensor& img, double slope) {
  return warp(img, [slope](double r, double c) { return std::pair{r + slope * c, c}; });
}

// Inverts every pixel at or above the threshold.
inline ImageTensor solarize(ImageTensor img, double threshold) {
  for (double& v : img.values()) {
    if (v >= threshold) v = 1.0 - v;
  }
  return img;
}

// Keeps the top `bits` bits of the 8-bit quantized value.
inline ImageTensor posterize(ImageTensor img, int bits) {
  bits = std::clamp(bits, 1, 8);
  const unsigned mask = (0xFFu << (8 - bits)) & 0xFFu;
  for (double& v : img.values()) {
    const auto q = static_cast<unsigned>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
    v = static_cast<double>(q & mask) / 255.0;
  }
  return img;
}

// Per-channel histogram equalization on 256 bins.
inline ImageTensor equalize(ImageTensor img) {
  const std::size_t pixels = img.height() * img.width();
  for (std::size_t z = 0; z < img.channels(); ++z) {
    std::array<std::size_t, 256> hist{};
    std::vector<unsigned> q(pixels);
    for (std::size_t i = 0; i < pixels; ++i) {
      const double v = std::clamp(img[i * img.channels() + z], 0.0, 1.0);
      q[i] = static_cast<unsigned>(std::lround(v * 255.0));
      ++hist[q[i]];
    }
    std::size_t last = 255;
    while (hist[last] == 0) --last;
    const std::size_t step = (pixels - hist[last]) / 255;
    if (step == 0) continue;
    std::array<double, 256> lut{};
    std::size_t cumulative = step / 2;
    for (std::size_t b = 0; b < 256; ++b) {
      lut[b] = static_cast<double>(std::min<std::size_t>(cumulative / step, 255)) / 255.0;
      cumulative += hist[b];
    }
    for (std::size_t i = 0; i < pixels; ++i) img[i * img.channels() + z] = lut[q[i]];
  }
  return img;
}

// Applies a named op with the given magnitude. Throws ConfigError for names
// outside kPixelOpNames.
inline ImageTensor apply_pixel_op(const ImageTensor& img, std::string_view name,
                                  double magnitude) {
  if (name == "identity") return img;
  if (name == "rotate") return rotate(img, magnitude);
  if (name == "translate_x") return translate_x(img, magnitude);
  if (name == "translate_y") return translate_y(img, magnitude);
  if (name == "shear_x") return shear_x(img, magnitude);
  if (name == "shear_y") return shear_y(img, magnitude);
  if (name == "solarize") return solarize(img, magnitude);
  if (name == "posterize") return posterize(img, static_cast<int>(std::lround(magnitude)));
  if (name == "equalize") return equalize(img);
  throw ConfigError("unknown pixel op '" + std::string(name) + "'");
}

// Largest centred window with the aspect ratio height:width.
inline ImageTensor center_crop_to_aspect(const ImageTensor& img, std::size_t height,
                                         std::size_t width) {
  std::size_t ch = img.height();
  std::size_t cw = img.width();
  // Compare img.h / img.w against height / width without division.
  if (img.height() * width > img.width() * height) {
    ch = std::max<std::size_t>(1, (img.width() * height + width / 2) / width);
  } else if (img.height() * width < img.width() * height) {
    cw = std::max<std::size_t>(1, (img.height() * width + height / 2) / height);
  }
  const std::size_t r0 = (img.height() - ch) / 2;
  const std::size_t c0 = (img.width() - cw) / 2;
  ImageTensor out(Shape{ch, cw, img.channels()});
  for (std::size_t x = 0; x < ch; ++x) {
    for (std::size_t y = 0; y < cw; ++y) {
      for (std::size_t z = 0; z < img.channels(); ++z) out(x, y, z) = img(r0 + x, c0 + y, z);
    }
  }
  return out;
}

// Bilinear resize with pixel-centre alignment; edges replicate.
inline ImageTensor resize_bilinear(const ImageTensor& img, std::size_t height,
                                   std::size_t width) {
  require_valid_shape(Shape{height, width, img.channels()});
  ImageTensor out(Shape{height, width, img.channels()});
  const double sr = static_cast<double>(img.height()) / static_cast<double>(height);
  const double sc = static_cast<double>(img.width()) / static_cast<double>(width);
  const double max_r = static_cast<double>(img.height() - 1);
  const double max_c = static_cast<double>(img.width() - 1);
  for (std::size_t x = 0; x < height; ++x) {
    const double r = std::clamp((static_cast<double>(x) + 0.5) * sr - 0.5, 0.0, max_r);
    const auto r0 = static_cast<std::size_t>(r);
    const std::size_t r1 = std::min(r0 + 1, img.height() - 1);
    const double fr = r - static_cast<double>(r0);
    for (std::size_t y = 0; y < width; ++y) {
      const double c = std::clamp((static_cast<double>(y) + 0.5) * sc - 0.5, 0.0, max_c);
      const auto c0 = static_cast<std::size_t>(c);
      const std::size_t c1 = std::min(c0 + 1, img.width() - 1);
      const double fc = c - static_cast<double>(c0);
      for (std::size_t z = 0; z < img.channels(); ++z) {
        out(x, y, z) = (1 - fr) * ((1 - fc) * img(r0, c0, z) + fc * img(r0, c1, z)) +
                       fr * ((1 - fc) * img(r1, c0, z) + fc * img(r1, c1, z));
      }
    }
  }
  return out;
}

}  // namespace vipaug
