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
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "vipaug/grid.hpp"

namespace vipaug {

// Boolean selection over spectral coordinates.
//
// `filter_size` is the S of the S x S x 1 window the mask was derived from and
// `rank` the amplitude rank it marks inside each window (1 = vital, the
// per-window maximum). Masks produced by set operations carry rank 0.
struct PhaseMask {
  Grid<std::uint8_t> bits;
  std::size_t filter_size = 0;
  std::size_t rank = 0;

  [[nodiscard]] const Shape& shape() const { return bits.shape(); }
  [[nodiscard]] bool contains(std::size_t i) const { return bits[i] != 0; }
  [[nodiscard]] bool contains(std::size_t u, std::size_t v, std::size_t w) const {
    return bits(u, v, w) != 0;
  }
  [[nodiscard]] std::size_t count() const {
    return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), 1));
  }

  friend bool operator==(const PhaseMask&, const PhaseMask&) = default;
};

using VitalMask = PhaseMask;
using RankMask = PhaseMask;

inline PhaseMask empty_mask(const Shape& shape) {
  return {Grid<std::uint8_t>(shape, 0), 0, 0};
}

inline PhaseMask full_mask(const Shape& shape) {
  return {Grid<std::uint8_t>(shape, 1), 0, 0};
}

namespace detail {

inline void check_filter(const Shape& shape, std::size_t filter_size) {
  require_valid_shape(shape);
  if (filter_size == 0) throw InvalidFilter("filter size must be at least 1");
  if (filter_size > shape.height || filter_size > shape.width) {
    throw InvalidFilter("filter size " + std::to_string(filter_size) +
                        " exceeds spectrum extent " + to_string(shape));
  }
}

// Calls fn(window) for every non-overlapping S x S x 1 window; `window` holds
// the flat indices of the window's coordinates in row-major order. Windows at
// the trailing edge are truncated when S does not divide H or W.
template <typename Fn>
void for_each_window(const Shape& shape, std::size_t s, Fn&& fn) {
  std::vector<std::size_t> window;
  window.reserve(s * s);
  for (std::size_t w = 0; w < shape.channels; ++w) {
    for (std::size_t bu = 0; bu < shape.height; bu += s) {
      for (std::size_t bv = 0; bv < shape.width; bv += s) {
        window.clear();
        const std::size_t eu = std::min(bu + s, shape.height);
        const std::size_t ev = std::min(bv + s, shape.width);
        for (std::size_t u = bu; u < eu; ++u) {
          for (std::size_t v = bv; v < ev; ++v) window.push_back(shape.index(u, v, w));
        }
        fn(std::as_const(window));
      }
    }
  }
}

}  // namespace detail

// Marks the largest-amplitude coordinate of every window; the first maximum
// in row-major order wins ties.
inline VitalMask detect_vital(const RealGrid& amplitude, std::size_t filter_size) {
  detail::check_filter(amplitude.shape(), filter_size);
  VitalMask mask{Grid<std::uint8_t>(amplitude.shape(), 0), filter_size, 1};
  detail::for_each_window(amplitude.shape(), filter_size,
                          [&](const std::vector<std::size_t>& window) {
                            std::size_t best = window.front();
                            for (std::size_t i : window) {
                              if (amplitude[i] > amplitude[best]) best = i;
                            }
                            mask.bits[best] = 1;
                          });
  return mask;
}

// Marks the coordinate holding the k-th largest amplitude of every window
// (same tie rule as detect_vital). Truncated edge windows holding fewer than
// k coordinates are left unmarked.
inline RankMask rank_mask(const RealGrid& amplitude, std::size_t filter_size,
                          std::size_t k) {
  detail::check_filter(amplitude.shape(), filter_size);
  if (k == 0 || k > filter_size * filter_size) {
    throw InvalidRank("rank " + std::to_string(k) + " outside [1, " +
                      std::to_string(filter_size * filter_size) + "]");
  }
  RankMask mask{Grid<std::uint8_t>(amplitude.shape(), 0), filter_size, k};
  std::vector<std::size_t> order;
  detail::for_each_window(amplitude.shape(), filter_size,
                          [&](const std::vector<std::size_t>& window) {
                            if (window.size() < k) return;
                            order = window;
                            std::stable_sort(order.begin(), order.end(),
                                             [&](std::size_t a, std::size_t b) {
                                               return amplitude[a] > amplitude[b];
                                             });
                            mask.bits[order[k - 1]] = 1;
                          });
  return mask;
}

inline PhaseMask invert_mask(const PhaseMask& mask) {
  PhaseMask out = mask;
  for (auto& b : out.bits) b = b ? 0 : 1;
  out.rank = 0;
  return out;
}

inline PhaseMask intersect(const PhaseMask& a, const PhaseMask& b) {
  require_same_shape(a.shape(), b.shape(), "mask intersection");
  PhaseMask out = a;
  for (std::size_t i = 0; i < out.bits.size(); ++i) {
    out.bits[i] = (a.bits[i] && b.bits[i]) ? 1 : 0;
  }
  out.rank = a.rank == b.rank ? a.rank : 0;
  return out;
}

}  // namespace vipaug
