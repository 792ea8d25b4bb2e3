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

// Test-only oracles and generators. Nothing here calls into the fast paths it
// is used to check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "vipaug/grid.hpp"
#include "vipaug/spectrum.hpp"
#include "vipaug/vitality.hpp"

namespace vipaug::testing {

inline ImageTensor random_image(const Shape& shape, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  std::vector<double> v(shape.size());
  for (double& x : v) x = dist(gen);
  return ImageTensor(shape, std::move(v));
}

inline RealGrid random_grid(const Shape& shape, std::uint64_t seed, double lo = 0.0,
                            double hi = 1.0) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  RealGrid g(shape);
  for (double& x : g) x = dist(gen);
  return g;
}

inline RealGrid random_phase(const Shape& shape, std::uint64_t seed) {
  RealGrid g = random_grid(shape, seed, -std::numbers::pi, std::numbers::pi);
  for (double& x : g) {
    if (x <= -std::numbers::pi) x = std::numbers::pi;
  }
  return g;
}

inline ComplexGrid random_complex(const Shape& shape, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  ComplexGrid g(shape);
  for (auto& c : g) c = {dist(gen), dist(gen)};
  return g;
}

// e^{sign 2 pi i (num / den)} with the fraction reduced first.
inline Complex literal_root(std::size_t num, std::size_t den, double sign) {
  const double a = 2.0 * std::numbers::pi * static_cast<double>(num % den) /
                   static_cast<double>(den);
  return {std::cos(a), sign * std::sin(a)};
}

// Direct triple sum over the selected axes. `three_d = false` leaves the
// channel axis untransformed.
inline ComplexGrid naive_transform(const ComplexGrid& in, bool three_d, double sign) {
  const Shape& s = in.shape();
  ComplexGrid out(s);
  for (std::size_t u = 0; u < s.height; ++u) {
    for (std::size_t v = 0; v < s.width; ++v) {
      for (std::size_t w = 0; w < s.channels; ++w) {
        Complex acc{0.0, 0.0};
        for (std::size_t x = 0; x < s.height; ++x) {
          for (std::size_t y = 0; y < s.width; ++y) {
            const Complex hw = literal_root(x * u, s.height, sign) *
                               literal_root(y * v, s.width, sign);
            if (three_d) {
              for (std::size_t z = 0; z < s.channels; ++z) {
                acc += in(x, y, z) * hw * literal_root(z * w, s.channels, sign);
              }
            } else {
              acc += in(x, y, w) * hw;
            }
          }
        }
        out(u, v, w) = acc;
      }
    }
  }
  return out;
}

inline ComplexGrid to_complex(const ImageTensor& img) {
  ComplexGrid g(img.shape());
  for (std::size_t i = 0; i < img.size(); ++i) g[i] = {img[i], 0.0};
  return g;
}

inline ComplexGrid naive_dft3(const ImageTensor& img) {
  return naive_transform(to_complex(img), true, -1.0);
}

inline ComplexGrid naive_dft2(const ImageTensor& img) {
  return naive_transform(to_complex(img), false, -1.0);
}

// Normalized inverse sum, 3D.
inline ComplexGrid naive_idft3(const ComplexGrid& spec) {
  ComplexGrid g = naive_transform(spec, true, 1.0);
  const double n = static_cast<double>(spec.size());
  for (auto& c : g) c /= n;
  return g;
}

inline ComplexGrid naive_idft2(const ComplexGrid& spec) {
  ComplexGrid g = naive_transform(spec, false, 1.0);
  const double n = static_cast<double>(spec.height() * spec.width());
  for (auto& c : g) c /= n;
  return g;
}

// max |a - b| / max |b|.
inline double relative_error(const ComplexGrid& a, const ComplexGrid& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num = std::max(num, std::abs(a[i] - b[i]));
    den = std::max(den, std::abs(b[i]));
  }
  return den == 0.0 ? num : num / den;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Brute-force per-window argmax: for every coordinate, scan its whole window
// and mark it iff no earlier (row-major) coordinate is >= and no later one is >.
inline Grid<std::uint8_t> brute_force_vital(const RealGrid& amp, std::size_t s) {
  const Shape& sh = amp.shape();
  Grid<std::uint8_t> out(sh, 0);
  for (std::size_t w = 0; w < sh.channels; ++w) {
    for (std::size_t u = 0; u < sh.height; ++u) {
      for (std::size_t v = 0; v < sh.width; ++v) {
        const std::size_t bu = (u / s) * s, bv = (v / s) * s;
        bool best = true;
        for (std::size_t a = bu; a < std::min(bu + s, sh.height) && best; ++a) {
          for (std::size_t b = bv; b < std::min(bv + s, sh.width); ++b) {
            const bool earlier = a < u || (a == u && b < v);
            const double other = amp(a, b, w), mine = amp(u, v, w);
            if ((earlier && other >= mine) || (!earlier && other > mine)) {
              best = false;
              break;
            }
          }
        }
        out(u, v, w) = best ? 1 : 0;
      }
    }
  }
  return out;
}

inline std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

}  // namespace vipaug::testing
