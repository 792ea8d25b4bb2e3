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

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "vipaug/augment.hpp"
#include "vipaug/pool.hpp"

namespace vipaug {

// Outcome of augmenting sample `index` of a batch.
struct SampleResult {
  ImageTensor image;
  bool fractal_applied = false;
  bool amplitude_swapped = false;
  PixelOpDraw pixel_op;
  std::optional<std::size_t> fractal_index;  // set when the fractal stage fired
};

inline void require_pool_matches(const FractalPool& pool, const Shape& shape,
                                 const AugmentConfig& config) {
  if (pool.canonical_shape() != shape) {
    throw ConfigError("pool shape " + to_string(pool.canonical_shape()) +
                      " does not match image shape " + to_string(shape));
  }
  if (pool.dft_mode() != config.dft_mode) {
    throw ConfigError("pool was built with a different dft_mode");
  }
}

// Pipeline trace for sample `index` plus the pool entry it drew.
struct SampleTrace {
  VipaugTrace trace;
  std::optional<std::size_t> fractal_pick;
};

// Runs the pipeline on one sample with the substream for (seed, index). The
// fractal entry is drawn from the kFractalPick child whether or not the
// fractal stage fires.
inline SampleTrace trace_sample(const ImageTensor& image, const ImageTensor& partner,
                                const FractalPool* pool, const AugmentConfig& config,
                                std::uint64_t seed, std::uint64_t index) {
  const RngStream rng = RngStream::for_sample(seed, index);
  static const RealGrid kNoFractal;
  const RealGrid* fractal = &kNoFractal;
  std::optional<std::size_t> pick;
  if (pool) {
    require_pool_matches(*pool, image.shape(), config);
    RngStream pick_rng = rng.substream(streams::kFractalPick);
    const PoolSample s = sample_phase(*pool, pick_rng);
    fractal = &s.phase;
    pick = s.index;
  }
  return {vipaug_trace(image, partner, *fractal, config, rng), pick};
}

inline SampleResult augment_sample(const ImageTensor& image, const ImageTensor& partner,
                                   const FractalPool* pool, const AugmentConfig& config,
                                   std::uint64_t seed, std::uint64_t index) {
  SampleTrace st = trace_sample(image, partner, pool, config, seed, index);
  SampleResult out;
  out.image = std::move(st.trace.image);
  out.fractal_applied = st.trace.fractal_applied;
  out.amplitude_swapped = st.trace.amplitude_swapped;
  out.pixel_op = std::move(st.trace.pixel_op);
  if (out.fractal_applied) out.fractal_index = st.fractal_pick;
  return out;
}

// Partner for sample `index`: uniform over the batch excluding the sample
// itself. A batch of one pairs the sample with itself.
inline std::size_t choose_partner(std::size_t batch_size, std::uint64_t seed,
                                  std::uint64_t index) {
  if (batch_size == 0) throw InvalidInput("empty batch");
  if (batch_size == 1) return 0;
  RngStream rng = RngStream::for_sample(seed, index).substream(streams::kPartnerPick);
  const auto j = static_cast<std::size_t>(rng.uniform_index(batch_size - 1));
  return j >= index ? j + 1 : j;
}

// Element i equals augment_sample(images[i], partners[i], pool, config, seed, i).
inline std::vector<ImageTensor> vipaug_batch(std::span<const ImageTensor> images,
                                             std::span<const ImageTensor> partners,
                                             const FractalPool* pool,
                                             const AugmentConfig& config, std::uint64_t seed) {
  if (images.size() != partners.size()) {
    throw ShapeMismatch("batch has " + std::to_string(images.size()) + " images but " +
                        std::to_string(partners.size()) + " partners");
  }
  std::vector<ImageTensor> out;
  out.reserve(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (images[i].shape() != images.front().shape() ||
        partners[i].shape() != images.front().shape()) {
      throw ShapeMismatch("batch element " + std::to_string(i) + " has a different shape");
    }
    out.push_back(augment_sample(images[i], partners[i], pool, config, seed, i).image);
  }
  return out;
}

}  // namespace vipaug
