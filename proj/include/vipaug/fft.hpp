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

// One-dimensional complex FFT of arbitrary length plus a helper that applies
// it along any subset of the axes of a rank-3 grid.
//
// Lengths are factored into primes. Small prime radices are combined with a
// direct butterfly; prime radices above kBluesteinThreshold go through
// Bluestein's chirp-z convolution on a power-of-two transform. Plans own only
// immutable tables, so a plan may be shared across threads.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <numbers>
#include <span>
#include <vector>

#include "vipaug/errors.hpp"
#include "vipaug/grid.hpp"

namespace vipaug::fft {

using Complex = std::complex<double>;

enum class Direction { forward, inverse };

namespace detail {

inline constexpr std::size_t kBluesteinThreshold = 61;

// e^{sign * 2 pi i * k / n}, reduced modulo n before the trig call.
inline Complex unit_root(std::size_t k, std::size_t n, Direction dir) {
  k %= n;
  if (k == 0) return {1.0, 0.0};
  // Exact values at the quarter points keep small transforms free of
  // rounding noise in the zero components.
  if (4 * k == n) return dir == Direction::forward ? Complex{0.0, -1.0} : Complex{0.0, 1.0};
  if (2 * k == n) return {-1.0, 0.0};
  if (4 * k == 3 * n) return dir == Direction::forward ? Complex{0.0, 1.0} : Complex{0.0, -1.0};
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) /
                       static_cast<double>(n);
  const double sign = dir == Direction::forward ? -1.0 : 1.0;
  return {std::cos(angle), sign * std::sin(angle)};
}

inline std::vector<std::size_t> prime_factors(std::size_t n) {
  std::vector<std::size_t> factors;
  for (std::size_t p = 2; p * p <= n; ++p) {
    while (n % p == 0) {
      factors.push_back(p);
      n /= p;
    }
  }
  if (n > 1) factors.push_back(n);
  return factors;
}

inline std::size_t next_pow2(std::size_t n) {
  std::size_t m = 1;
  while (m < n) m <<= 1;
  return m;
}

}  // namespace detail

class Plan;

namespace detail {

// Prime-length DFT via chirp-z: x_k = c_k * sum_j (x_j c_j) conj(c_{k-j}).
class Bluestein {
 public:
  Bluestein(std::size_t n, Direction dir);

  void execute(std::span<Complex> data) const;

 private:
  std::size_t n_;
  std::size_t m_;
  std::vector<Complex> chirp_;
  std::vector<Complex> kernel_spectrum_;
  std::shared_ptr<const Plan> forward_;
  std::shared_ptr<const Plan> inverse_;
};

}  // namespace detail

// Unnormalized 1D DFT plan of a fixed length and direction.
class Plan {
 public:
  Plan(std::size_t n, Direction dir)
      : n_(n), dir_(dir), factors_(detail::prime_factors(n)) {
    if (n == 0) throw InvalidShape("transform length must be positive");
    roots_.resize(n);
    for (std::size_t k = 0; k < n; ++k) roots_[k] = detail::unit_root(k, n, dir);
    for (std::size_t p : factors_) {
      if (p > detail::kBluesteinThreshold && !bluestein_) {
        bluestein_ = std::make_shared<detail::Bluestein>(p, dir);
      }
    }
  }

  [[nodiscard]] std::size_t size() const { return n_; }
  [[nodiscard]] Direction direction() const { return dir_; }

  // Transforms `in` (read with the given stride) into contiguous `out`.
  void execute(const Complex* in, std::size_t stride, Complex* out) const {
    std::vector<Complex> scratch(max_radix());
    recurse(in, stride, out, n_, 0, scratch);
  }

  void execute(std::span<Complex> data) const {
    std::vector<Complex> out(n_);
    execute(data.data(), 1, out.data());
    std::copy(out.begin(), out.end(), data.begin());
  }

 private:
  [[nodiscard]] std::size_t max_radix() const {
    std::size_t r = 1;
    for (std::size_t p : factors_) r = std::max(r, p);
    return r;
  }

  void recurse(const Complex* in, std::size_t stride, Complex* out,
               std::size_t n, std::size_t level,
               std::vector<Complex>& scratch) const {
    if (n == 1) {
      out[0] = in[0];
      return;
    }
    const std::size_t p = factors_[level];
    const std::size_t m = n / p;
    for (std::size_t r = 0; r < p; ++r) {
      recurse(in + r * stride, stride * p, out + r * m, m, level + 1, scratch);
    }
    // Root of unity of order n is roots_[n_/n]; order p is roots_[n_/p].
    const std::size_t step_n = n_ / n;
    const std::size_t step_p = n_ / p;
    std::span<Complex> tmp(scratch.data(), p);
    std::vector<Complex> col(p);
    for (std::size_t k = 0; k < m; ++k) {
      for (std::size_t r = 0; r < p; ++r) {
        tmp[r] = out[r * m + k] * roots_[(r * k * step_n) % n_];
      }
      if (p > detail::kBluesteinThreshold) {
        bluestein_->execute(tmp);
        for (std::size_t q = 0; q < p; ++q) out[q * m + k] = tmp[q];
        continue;
      }
      for (std::size_t q = 0; q < p; ++q) {
        Complex acc{0.0, 0.0};
        for (std::size_t r = 0; r < p; ++r) {
          acc += tmp[r] * roots_[((r * q) % p) * step_p];
        }
        col[q] = acc;
      }
      for (std::size_t q = 0; q < p; ++q) out[q * m + k] = col[q];
    }
  }

  std::size_t n_;
  Direction dir_;
  std::vector<std::size_t> factors_;
  std::vector<Complex> roots_;
  std::shared_ptr<detail::Bluestein> bluestein_;
};

namespace detail {

inline Bluestein::Bluestein(std::size_t n, Direction dir)
    : n_(n), m_(next_pow2(2 * n - 1)), chirp_(n), kernel_spectrum_(m_) {
  // chirp_j = e^{sign * pi i j^2 / n}; j^2 is reduced modulo 2n.
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t jj = (j * j) % (2 * n);
    chirp_[j] = unit_root(jj, 2 * n, dir);
  }
  forward_ = std::make_shared<Plan>(m_, Direction::forward);
  inverse_ = std::make_shared<Plan>(m_, Direction::inverse);
  std::vector<Complex> kernel(m_, Complex{0.0, 0.0});
  kernel[0] = std::conj(chirp_[0]);
  for (std::size_t j = 1; j < n; ++j) {
    kernel[j] = std::conj(chirp_[j]);
    kernel[m_ - j] = std::conj(chirp_[j]);
  }
  forward_->execute(kernel.data(), 1, kernel_spectrum_.data());
}

inline void Bluestein::execute(std::span<Complex> data) const {
  std::vector<Complex> a(m_, Complex{0.0, 0.0});
  for (std::size_t j = 0; j < n_; ++j) a[j] = data[j] * chirp_[j];
  std::vector<Complex> spec(m_);
  forward_->execute(a.data(), 1, spec.data());
  for (std::size_t i = 0; i < m_; ++i) spec[i] *= kernel_spectrum_[i];
  inverse_->execute(spec.data(), 1, a.data());
  const double scale = 1.0 / static_cast<double>(m_);
  for (std::size_t k = 0; k < n_; ++k) data[k] = chirp_[k] * a[k] * scale;
}

}  // namespace detail

// Applies an unnormalized 1D transform along each selected axis
// (0 = height, 1 = width, 2 = channels) in place.
inline void transform_axes(Grid<Complex>& grid, Direction dir,
                           std::span<const int> axes) {
  const Shape& s = grid.shape();
  const std::size_t extent[3] = {s.height, s.width, s.channels};
  const std::size_t stride[3] = {s.width * s.channels, s.channels, 1};
  for (int axis : axes) {
    const std::size_t n = extent[axis];
    if (n == 1) continue;
    const Plan plan(n, dir);
    std::vector<Complex> line(n);
    // Enumerate every line along `axis` by its base offset.
    for (std::size_t base = 0; base < grid.size(); ++base) {
      if ((base / stride[axis]) % n != 0) continue;
      plan.execute(grid.values().data() + base, stride[axis], line.data());
      for (std::size_t k = 0; k < n; ++k) grid[base + k * stride[axis]] = line[k];
    }
  }
}

}  // namespace vipaug::fft
