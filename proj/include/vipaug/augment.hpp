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
#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "vipaug/config.hpp"
#include "vipaug/pixel_ops.hpp"
#include "vipaug/rng.hpp"
#include "vipaug/spectrum.hpp"
#include "vipaug/vitality.hpp"

namespace vipaug {

// Substream tags. Each random stage of a sample draws from its own child of
// the sample stream so that replaying one stage never shifts another.
namespace streams {
inline constexpr std::uint64_t kDecision = 0;      // fractal / swap coin flips
inline constexpr std::uint64_t kPixelOp = 1;       // t: op choice and magnitude
inline constexpr std::uint64_t kGaussian = 2;      // g: phase jitter
inline constexpr std::uint64_t kUniformMask = 3;   // uniform variant's kept set
inline constexpr std::uint64_t kFractalPick = 4;   // pool entry selection
inline constexpr std::uint64_t kPartnerPick = 5;   // amplitude partner selection
}  // namespace streams

// Gaussian phase jitter: N(0, sigma_vital^2) on coordinates in `vital`,
// N(0, sigma_nonvital^2) elsewhere, wrapped into (-pi, pi]. One draw is
// consumed per coordinate in flat order.
inline RealGrid vipaug_g(const RealGrid& phase, const PhaseMask& vital,
                         double sigma_vital, double sigma_nonvital, RngStream& rng) {
  require_same_shape(phase.shape(), vital.shape(), "vipaug_g");
  if (!(sigma_vital >= 0.0) || !(sigma_nonvital >= 0.0)) {
    throw InvalidInput("vipaug_g: sigmas must be non-negative");
  }
  RealGrid out = phase;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double sigma = vital.contains(i) ? sigma_vital : sigma_nonvital;
    const double delta = rng.normal(sigma);
    if (sigma != 0.0) out[i] = wrap_phase(out[i] + delta);
  }
  return out;
}

// Fractal phase substitution: coordinates in `vital` or `retain` keep their
// phase, every other coordinate takes the fractal phase.
inline RealGrid vipaug_f(const RealGrid& phase, const PhaseMask& vital,
                         const RealGrid& fractal_phase,
                         const PhaseMask* retain = nullptr) {
  require_same_shape(phase.shape(), vital.shape(), "vipaug_f");
  require_same_shape(phase.shape(), fractal_phase.shape(), "vipaug_f fractal");
  if (retain) require_same_shape(phase.shape(), retain->shape(), "vipaug_f retain");
  RealGrid out = phase;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (vital.contains(i) || (retain && retain->contains(i))) continue;
    out[i] = fractal_phase[i];
  }
  return out;
}

// Centred low-frequency block covering `ratio` of the (u, v) plane, in natural
// layout, replicated over every channel. The block has sides
// round(H sqrt(ratio)) x round(W sqrt(ratio)) and starts at
// floor(H/2) - floor(side/2) in the DC-centred layout.
inline PhaseMask low_freq_block(const Shape& shape, double ratio) {
  if (!(ratio >= 0.0 && ratio <= 1.0)) {
    throw InvalidInput("low-frequency ratio must lie in [0, 1]");
  }
  const double root = std::sqrt(ratio);
  const auto bh = static_cast<std::size_t>(std::lround(static_cast<double>(shape.height) * root));
  const auto bw = static_cast<std::size_t>(std::lround(static_cast<double>(shape.width) * root));
  Grid<std::uint8_t> centred(shape, 0);
  const std::size_t r0 = shape.height / 2 - bh / 2;
  const std::size_t c0 = shape.width / 2 - bw / 2;
  for (std::size_t u = r0; u < r0 + bh; ++u) {
    for (std::size_t v = c0; v < c0 + bw; ++v) {
      for (std::size_t w = 0; w < shape.channels; ++w) centred(u, v, w) = 1;
    }
  }
  return {roll_dc(centred, /*forward=*/false), 0, 0};
}

// Rank-2 coordinates of each window that fall inside the low-frequency block.
inline RankMask low_freq_retain_mask(const RealGrid& amplitude, std::size_t filter_size,
                                     double ratio) {
  if (!(ratio >= 0.0 && ratio <= 1.0)) {
    throw InvalidInput("low-frequency ratio must lie in [0, 1]");
  }
  RankMask mask = intersect(rank_mask(amplitude, filter_size, 2),
                            low_freq_block(amplitude.shape(), ratio));
  mask.filter_size = filter_size;
  mask.rank = 2;
  return mask;
}

// Amplitude-phase recombination: own phase, other's amplitude.
inline PolarSpectrum apr_sp(const PolarSpectrum& self, const PolarSpectrum& other) {
  require_same_shape(self.shape(), other.shape(), "apr_sp");
  return {other.amplitude, self.phase, self.layout};
}

struct PixelOpDraw {
  std::string name;
  double magnitude = 0.0;
};

// Picks one enabled op uniformly and a magnitude uniformly from its range.
inline PixelOpDraw draw_pixel_op(const AugmentConfig& config, RngStream& rng) {
  if (config.pixel_ops.empty()) throw ConfigError("pixel_ops must not be empty");
  const auto& op = config.pixel_ops[rng.uniform_index(config.pixel_ops.size())];
  if (!is_known_pixel_op(op.name)) throw ConfigError("unknown pixel op '" + op.name + "'");
  const double u = rng.uniform();
  double magnitude = op.min + (op.max - op.min) * u;
  if (op.name == "posterize") {
    const auto lo = std::lround(op.min);
    const auto hi = std::lround(op.max);
    magnitude = static_cast<double>(lo + static_cast<long>(rng.uniform_index(
                                              static_cast<std::uint64_t>(hi - lo + 1))));
  }
  return {op.name, magnitude};
}

inline ImageTensor pixel_stage_t(const ImageTensor& image, const AugmentConfig& config,
                                 RngStream& rng, PixelOpDraw* drawn = nullptr) {
  PixelOpDraw d = draw_pixel_op(config, rng);
  ImageTensor out = apply_pixel_op(image, d.name, d.magnitude);
  if (drawn) *drawn = std::move(d);
  return out;
}

// One kept coordinate per window chosen uniformly at random (uniform
// variant), consuming one draw per window in window order.
inline PhaseMask random_window_mask(const Shape& shape, std::size_t filter_size,
                                    RngStream& rng) {
  detail::check_filter(shape, filter_size);
  PhaseMask mask{Grid<std::uint8_t>(shape, 0), filter_size, 0};
  detail::for_each_window(shape, filter_size, [&](const std::vector<std::size_t>& window) {
    mask.bits[window[rng.uniform_index(window.size())]] = 1;
  });
  return mask;
}

// (sigma for preserved coordinates, sigma elsewhere) after variant rules.
inline std::pair<double, double> effective_sigmas(const AugmentConfig& config) {
  if (config.variant == Variant::uniform) return {config.sigma_nonvital, config.sigma_nonvital};
  return {config.sigma_vital, config.sigma_nonvital};
}

// Intermediate values of one pipeline run.
struct VipaugTrace {
  PolarSpectrum original;
  PhaseMask vital;            // detected on the original amplitude
  PhaseMask preserved;        // mask playing the vital role for f and g
  std::optional<PhaseMask> retain;
  bool fractal_applied = false;
  bool amplitude_swapped = false;
  PixelOpDraw pixel_op;
  RealGrid phase_after_f;
  RealGrid phase_after_t;
  RealGrid phase_after_g;
  RealGrid final_amplitude;
  ImageTensor image;
};

// Full pipeline P_aug = g(t(h(P))) with APR-SP amplitude.
//
// Stages, in order:
//   1. forward transform of image (and partner) per dft_mode
//   2. vital mask from the original amplitude, reused by every stage
//   3. h: with probability p_fractal, fractal substitution
//   4. t: reconstruct from (original amplitude, current phase), apply one
//      pixel op, re-transform, keep only the phase
//   5. g: Gaussian jitter
//   6. with probability p_amplitude_swap take the partner amplitude
//   7. inverse transform, real part, clamp to [0, 1]
//
// `fractal_phase` may be an empty grid when no fractal is available; the
// call then fails only if the fractal stage fires.
inline VipaugTrace vipaug_trace(const ImageTensor& image, const ImageTensor& partner,
                                const RealGrid& fractal_phase, const AugmentConfig& config,
                                const RngStream& rng) {
  validate(config);
  require_same_shape(image.shape(), partner.shape(), "vipaug partner");
  const DftMode mode = config.dft_mode;

  VipaugTrace tr;
  tr.original = polar_spectrum(image, mode);
  const RealGrid& amplitude = tr.original.amplitude;

  RngStream decision = rng.substream(streams::kDecision);
  tr.fractal_applied = decision.bernoulli(config.p_fractal);
  tr.amplitude_swapped = decision.bernoulli(config.p_amplitude_swap);

  tr.vital = detect_vital(amplitude, config.filter_size);
  const auto [sigma_vital, sigma_nonvital] = effective_sigmas(config);
  switch (config.variant) {
    case Variant::standard:
      tr.preserved = tr.vital;
      if (config.low_freq_ratio > 0.0) {
        tr.retain = low_freq_retain_mask(amplitude, config.filter_size, config.low_freq_ratio);
      }
      break;
    case Variant::reverse:
      tr.preserved = rank_mask(amplitude, config.filter_size, 2);
      if (config.low_freq_ratio > 0.0) {
        tr.retain = intersect(tr.vital, low_freq_block(amplitude.shape(), config.low_freq_ratio));
      }
      break;
    case Variant::uniform: {
      RngStream mask_rng = rng.substream(streams::kUniformMask);
      tr.preserved = random_window_mask(amplitude.shape(), config.filter_size, mask_rng);
      break;
    }
  }

  tr.phase_after_f = tr.original.phase;
  if (tr.fractal_applied) {
    if (fractal_phase.size() == 0) {
      throw InvalidInput("fractal stage fired but no fractal phase was supplied");
    }
    require_same_shape(fractal_phase.shape(), image.shape(), "vipaug fractal");
    tr.phase_after_f = vipaug_f(tr.original.phase, tr.preserved, fractal_phase,
                                tr.retain ? &*tr.retain : nullptr);
  }

  RngStream pixel_rng = rng.substream(streams::kPixelOp);
  const ImageTensor intermediate = reconstruct(amplitude, tr.phase_after_f, mode);
  const ImageTensor moved = pixel_stage_t(intermediate, config, pixel_rng, &tr.pixel_op);
  tr.phase_after_t = polar_spectrum(moved, mode).phase;

  RngStream gauss_rng = rng.substream(streams::kGaussian);
  tr.phase_after_g = vipaug_g(tr.phase_after_t, tr.preserved, sigma_vital, sigma_nonvital,
                              gauss_rng);

  tr.final_amplitude =
      tr.amplitude_swapped ? polar_spectrum(partner, mode).amplitude : amplitude;
  tr.image = clamp_unit(reconstruct(tr.final_amplitude, tr.phase_after_g, mode));
  return tr;
}

inline ImageTensor vipaug(const ImageTensor& image, const ImageTensor& partner,
                          const RealGrid& fractal_phase, const AugmentConfig& config,
                          const RngStream& rng) {
  return vipaug_trace(image, partner, fractal_phase, config, rng).image;
}

}  // namespace vipaug
