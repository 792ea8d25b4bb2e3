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

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "vipaug/fft.hpp"
#include "vipaug/grid.hpp"

namespace vipaug {

using Complex = std::complex<double>;
using ComplexGrid = Grid<Complex>;

// Where the zero-frequency coefficient sits.
enum class Layout { natural, dc_centered };

// Full 3D transform (height, width and channel axes) or independent 2D
// transforms per channel slice.
enum class DftMode { three_d, two_d };

inline const char* to_string(DftMode mode) {
  return mode == DftMode::three_d ? "3d" : "2d";
}

inline DftMode parse_dft_mode(const std::string& s) {
  if (s == "3d") return DftMode::three_d;
  if (s == "2d") return DftMode::two_d;
  throw ConfigError("unknown dft_mode '" + s + "' (expected 3d or 2d)");
}

struct ComplexSpectrum {
  ComplexGrid coefficients;
  Layout layout = Layout::natural;

  [[nodiscard]] const Shape& shape() const { return coefficients.shape(); }
};

struct PolarSpectrum {
  RealGrid amplitude;
  RealGrid phase;
  Layout layout = Layout::natural;

  [[nodiscard]] const Shape& shape() const { return amplitude.shape(); }
};

// Principal value of an angle, in (-pi, pi].
inline double wrap_phase(double angle) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double r = std::remainder(angle, kTwoPi);
  if (r <= -std::numbers::pi) r += kTwoPi;
  if (r > std::numbers::pi) r -= kTwoPi;
  return r;
}

inline bool is_principal_phase(double p) {
  return p > -std::numbers::pi && p <= std::numbers::pi;
}

inline void require_principal_phase(const RealGrid& phase, const char* what) {
  for (double p : phase) {
    if (!is_principal_phase(p)) {
      throw InvalidInput(std::string(what) + ": phase outside (-pi, pi]");
    }
  }
}

namespace detail {

inline ComplexGrid complexify(const ImageTensor& image) {
  ComplexGrid out(image.shape());
  for (std::size_t i = 0; i < image.size(); ++i) out[i] = Complex{image[i], 0.0};
  return out;
}

inline ComplexSpectrum forward(const ImageTensor& image, std::span<const int> axes) {
  require_valid_shape(image.shape());
  ComplexGrid g = complexify(image);
  fft::transform_axes(g, fft::Direction::forward, axes);
  return {std::move(g), Layout::natural};
}

inline ComplexGrid inverse(const ComplexSpectrum& spec, std::span<const int> axes) {
  require_valid_shape(spec.shape());
  if (spec.layout != Layout::natural) {
    throw InvalidInput("inverse transform requires natural layout");
  }
  ComplexGrid g = spec.coefficients;
  fft::transform_axes(g, fft::Direction::inverse, axes);
  std::size_t n = 1;
  const Shape& s = spec.shape();
  const std::size_t extent[3] = {s.height, s.width, s.channels};
  for (int a : axes) n *= extent[a];
  const double scale = 1.0 / static_cast<double>(n);
  for (Complex& c : g) c *= scale;
  return g;
}

inline constexpr std::array<int, 3> kAxes3{0, 1, 2};
inline constexpr std::array<int, 2> kAxes2{0, 1};

inline ImageTensor real_part(const ComplexGrid& g) {
  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = g[i].real();
  return ImageTensor(g.shape(), std::move(out));
}

}  // namespace detail

// F(u,v,w) = sum_{x,y,z} f(x,y,z) e^{-2 pi i (xu/H + yv/W + zw/C)}.
inline ComplexSpectrum dft3(const ImageTensor& image) {
  return detail::forward(image, detail::kAxes3);
}

// Each channel slice transformed over (u, v); w is the channel index.
inline ComplexSpectrum dft2_per_channel(const ImageTensor& image) {
  return detail::forward(image, detail::kAxes2);
}

inline ComplexSpectrum dft(const ImageTensor& image, DftMode mode) {
  return mode == DftMode::three_d ? dft3(image) : dft2_per_channel(image);
}

// Complex result of the normalized inverse 3D sum, before realification.
inline ComplexGrid idft3_complex(const ComplexSpectrum& spec) {
  return detail::inverse(spec, detail::kAxes3);
}

inline ComplexGrid idft2_per_channel_complex(const ComplexSpectrum& spec) {
  return detail::inverse(spec, detail::kAxes2);
}

// Real part of the normalized inverse transform. Spectra whose conjugate
// symmetry was broken by phase edits have a non-zero imaginary residue that is
// discarded here.
inline ImageTensor idft3(const ComplexSpectrum& spec) {
  return detail::real_part(idft3_complex(spec));
}

inline ImageTensor idft2_per_channel(const ComplexSpectrum& spec) {
  return detail::real_part(idft2_per_channel_complex(spec));
}

inline ImageTensor idft(const ComplexSpectrum& spec, DftMode mode) {
  return mode == DftMode::three_d ? idft3(spec) : idft2_per_channel(spec);
}

// Amplitude |F| and phase atan2(I, R) in (-pi, pi]. Zero coefficients get
// phase 0.
inline PolarSpectrum to_polar(const ComplexSpectrum& spec) {
  PolarSpectrum out{RealGrid(spec.shape()), RealGrid(spec.shape()), spec.layout};
  for (std::size_t i = 0; i < spec.coefficients.size(); ++i) {
    const Complex c = spec.coefficients[i];
    const double a = std::abs(c);
    out.amplitude[i] = a;
    if (a == 0.0) {
      out.phase[i] = 0.0;
    } else {
      double p = std::atan2(c.imag(), c.real());
      if (p <= -std::numbers::pi) p = std::numbers::pi;
      out.phase[i] = p;
    }
  }
  return out;
}

// F = A e^{iP}. Negative amplitudes are rejected.
inline ComplexSpectrum from_polar(const PolarSpectrum& polar) {
  require_same_shape(polar.amplitude.shape(), polar.phase.shape(), "from_polar");
  ComplexSpectrum out{ComplexGrid(polar.shape()), polar.layout};
  for (std::size_t i = 0; i < polar.amplitude.size(); ++i) {
    const double a = polar.amplitude[i];
    if (!(a >= 0.0)) throw InvalidInput("from_polar: negative amplitude");
    if (a == 0.0) {
      out.coefficients[i] = Complex{0.0, 0.0};
    } else {
      const double p = polar.phase[i];
      out.coefficients[i] = Complex{a * std::cos(p), a * std::sin(p)};
    }
  }
  return out;
}

// Rolls a grid along height and width. Forward moves index u to
// (u + floor(H/2)) mod H so the DC term lands at (floor(H/2), floor(W/2));
// backward is its exact inverse, including odd extents.
template <typename T>
Grid<T> roll_dc(const Grid<T>& in, bool forward) {
  const Shape& s = in.shape();
  const std::size_t dh = forward ? s.height / 2 : s.height - s.height / 2;
  const std::size_t dw = forward ? s.width / 2 : s.width - s.width / 2;
  Grid<T> out(s);
  for (std::size_t u = 0; u < s.height; ++u) {
    const std::size_t uu = (u + dh) % s.height;
    for (std::size_t v = 0; v < s.width; ++v) {
      const std::size_t vv = (v + dw) % s.width;
      for (std::size_t w = 0; w < s.channels; ++w) out(uu, vv, w) = in(u, v, w);
    }
  }
  return out;
}

// Natural layout -> DC-centered, and DC-centered -> natural.
inline ComplexSpectrum shift_dc_center(const ComplexSpectrum& spec) {
  const bool forward = spec.layout == Layout::natural;
  return {roll_dc(spec.coefficients, forward),
          forward ? Layout::dc_centered : Layout::natural};
}

inline PolarSpectrum shift_dc_center(const PolarSpectrum& spec) {
  const bool forward = spec.layout == Layout::natural;
  return {roll_dc(spec.amplitude, forward), roll_dc(spec.phase, forward),
          forward ? Layout::dc_centered : Layout::natural};
}

// Convenience: the polar spectrum of an image under the given mode.
inline PolarSpectrum polar_spectrum(const ImageTensor& image, DftMode mode) {
  return to_polar(dft(image, mode));
}

// Inverse of polar_spectrum with realification.
inline ImageTensor reconstruct(const RealGrid& amplitude, const RealGrid& phase,
                               DftMode mode) {
  return idft(from_polar(PolarSpectrum{amplitude, phase, Layout::natural}), mode);
}

}  // namespace vipaug
