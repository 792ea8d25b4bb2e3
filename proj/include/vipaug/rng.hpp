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
#include <limits>
#include <numbers>
#include <random>

#include "vipaug/errors.hpp"

namespace vipaug {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic random stream.
//
// A stream is identified by a 64-bit key. `substream(tag)` derives a child
// from the key alone, so children are independent of how many draws the
// parent has made. Samples in a batch use for_sample(master_seed, index); the
// draws a sample sees therefore do not depend on which worker runs it.
//
// Draws are built from std::mt19937_64 output with explicit arithmetic
// (no std::*_distribution) so sequences are identical across standard
// library implementations.
class RngStream {
 public:
  explicit RngStream(std::uint64_t key) : key_(key), engine_(splitmix64(key)) {}

  static RngStream for_sample(std::uint64_t master_seed, std::uint64_t index) {
    return RngStream(splitmix64(master_seed) ^ splitmix64(~index));
  }

  [[nodiscard]] RngStream substream(std::uint64_t tag) const {
    return RngStream(splitmix64(key_ + 0x632be59bd9b4e019ULL * (tag + 1)));
  }

  [[nodiscard]] std::uint64_t key() const { return key_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n) {
    if (n == 0) throw InvalidInput("uniform_index over an empty range");
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - (max % n + 1) % n;
    std::uint64_t x = engine_();
    while (x > limit) x = engine_();
    return x % n;
  }

  // Standard normal via Box-Muller; the second value of each pair is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  double normal(double sigma) { return sigma * normal(); }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::uint64_t key_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace vipaug
