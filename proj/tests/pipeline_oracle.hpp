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

#ifndef VIPAUG_TESTS_PIPELINE_ORACLE_HPP_
#define VIPAUG_TESTS_PIPELINE_ORACLE_HPP_

#include <cmath>
#include <utility>

#include "test_util.hpp"
#include "vipaug/augment.hpp"

namespace vipaug::testing {

struct ReplayResult {
  VitalMask vital;
  RealGrid final_amplitude;
  RealGrid phase_after_g;
  ImageTensor image;
};

// Step-by-step 3D pipeline with direct-sum transforms, for configs where both
// the fractal stage and the amplitude swap always fire (probability 1) and the
// variant is standard.
inline ReplayResult replay_pipeline(const ImageTensor& img, const ImageTensor& partner,
                                    const RealGrid& fractal, const AugmentConfig& config,
                                    const RngStream& rng) {
  const Shape shape = img.shape();
  const auto polar = [](const ComplexGrid& g) {
    RealGrid a(g.shape()), p(g.shape());
    for (std::size_t i = 0; i < g.size(); ++i) {
      a[i] = std::abs(g[i]);
      p[i] = a[i] == 0.0 ? 0.0 : std::atan2(g[i].imag(), g[i].real());
    }
    return std::pair{a, p};
  };
  const auto rebuild = [&](const RealGrid& a, const RealGrid& p) {
    ComplexGrid g(shape);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = std::polar(a[i], p[i]);
    const ComplexGrid inv = naive_idft3(g);
    std::vector<double> re(inv.size());
    for (std::size_t i = 0; i < re.size(); ++i) re[i] = inv[i].real();
    return ImageTensor(shape, re);
  };

  const auto [amp, phase] = polar(naive_dft3(img));
  VitalMask vital = detect_vital(amp, config.filter_size);
  const RankMask retain = low_freq_retain_mask(amp, config.filter_size, config.low_freq_ratio);
  const RealGrid after_f = vipaug_f(phase, vital, fractal, &retain);
  RngStream pixel_rng = rng.substream(streams::kPixelOp);
  const ImageTensor moved = pixel_stage_t(rebuild(amp, after_f), config, pixel_rng);
  const RealGrid after_t = polar(naive_dft3(moved)).second;
  RngStream gauss_rng = rng.substream(streams::kGaussian);
  RealGrid after_g =
      vipaug_g(after_t, vital, config.sigma_vital, config.sigma_nonvital, gauss_rng);
  RealGrid partner_amp = polar(naive_dft3(partner)).first;
  ImageTensor image = clamp_unit(rebuild(partner_amp, after_g));
  return {std::move(vital), std::move(partner_amp), std::move(after_g), std::move(image)};
}

// Largest deviation of the library trace from the replay, phases compared
// modulo 2*pi.
inline double replay_error(const VipaugTrace& tr, const ReplayResult& r) {
  double err = 0.0;
  for (std::size_t i = 0; i < r.final_amplitude.size(); ++i) {
    err = std::max(err, std::abs(tr.final_amplitude[i] - r.final_amplitude[i]));
    err = std::max(err, std::abs(wrap_phase(tr.phase_after_g[i] - r.phase_after_g[i])));
  }
  return std::max(err, max_abs_diff(tr.image.values(), r.image.values()));
}

}  // namespace vipaug::testing

#endif  // VIPAUG_TESTS_PIPELINE_ORACLE_HPP_
