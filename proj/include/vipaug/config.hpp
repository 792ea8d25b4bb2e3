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
#include <string>
#include <vector>

#include "vipaug/errors.hpp"
#include "vipaug/pixel_ops.hpp"
#include "vipaug/spectrum.hpp"

namespace vipaug {

// standard: weak jitter on vital phases, strong elsewhere.
// reverse: the rank-2 coordinate of each window plays the vital role and the
//   true vital coordinate is treated as non-vital.
// uniform: one jitter strength everywhere and fractal substitution that
//   ignores vitality.
enum class Variant { standard, reverse, uniform };

inline const char* to_string(Variant v) {
  switch (v) {
    case Variant::standard: return "standard";
    case Variant::reverse: return "reverse";
    case Variant::uniform: return "uniform";
  }
  return "standard";
}

inline Variant parse_variant(const std::string& s) {
  if (s == "standard") return Variant::standard;
  if (s == "reverse") return Variant::reverse;
  if (s == "uniform") return Variant::uniform;
  throw ConfigError("unknown variant '" + s + "'");
}

// Pipeline hyperparameters. Defaults are the CIFAR-10 reference setting with
// neutral 0.5 stage probabilities.
struct AugmentConfig {
  double sigma_vital = 0.001;
  double sigma_nonvital = 0.014;
  std::size_t filter_size = 2;
  double low_freq_ratio = 4.0 / 9.0;
  double p_fractal = 0.5;
  double p_amplitude_swap = 0.5;
  DftMode dft_mode = DftMode::three_d;
  Variant variant = Variant::standard;
  std::vector<PixelOpSpec> pixel_ops = default_pixel_ops();
  std::uint64_t seed = 0;

  friend bool operator==(const AugmentConfig&, const AugmentConfig&) = default;
};

// A configuration with every random stage switched off; vipaug reduces to an
// identity up to realification and clamping.
inline AugmentConfig disabled_config() {
  AugmentConfig c;
  c.sigma_vital = 0.0;
  c.sigma_nonvital = 0.0;
  c.low_freq_ratio = 0.0;
  c.p_fractal = 0.0;
  c.p_amplitude_swap = 0.0;
  c.pixel_ops = {{"identity", 0.0, 0.0}};
  return c;
}

inline void validate(const AugmentConfig& c) {
  const auto probability = [](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ConfigError(std::string(name) + " must lie in [0, 1]");
    }
  };
  if (!(std::isfinite(c.sigma_vital) && c.sigma_vital >= 0.0) ||
      !(std::isfinite(c.sigma_nonvital) && c.sigma_nonvital >= 0.0)) {
    throw ConfigError("sigmas must be finite and non-negative");
  }
  if (c.variant == Variant::standard && c.sigma_vital > c.sigma_nonvital) {
    throw ConfigError("standard variant requires sigma_vital <= sigma_nonvital");
  }
  probability(c.p_fractal, "p_fractal");
  probability(c.p_amplitude_swap, "p_amplitude_swap");
  probability(c.low_freq_ratio, "low_freq_ratio");
  if (c.filter_size == 0) throw ConfigError("filter_size must be at least 1");
  if (c.filter_size < 2 && (c.low_freq_ratio > 0.0 || c.variant == Variant::reverse)) {
    throw ConfigError("low-frequency retention and the reverse variant need filter_size >= 2");
  }
  if (c.pixel_ops.empty()) throw ConfigError("pixel_ops must not be empty");
  for (const auto& op : c.pixel_ops) {
    if (!is_known_pixel_op(op.name)) throw ConfigError("unknown pixel op '" + op.name + "'");
    if (!(std::isfinite(op.min) && std::isfinite(op.max)) || op.min > op.max) {
      throw ConfigError("pixel op '" + op.name + "' has an invalid magnitude range");
    }
  }
}

}  // namespace vipaug
