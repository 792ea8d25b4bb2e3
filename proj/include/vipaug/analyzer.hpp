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

// Diagnostics: phase-fluctuation counting between clean and corrupted
// images, phase-ablation reconstructions, and corruption-error arithmetic.

#include <array>
#include <cmath>
#include <cstddef>
#include <istream>
#include <map>
#include <numeric>
#include <sstream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vipaug/grid.hpp"
#include "vipaug/rng.hpp"
#include "vipaug/spectrum.hpp"
#include "vipaug/vitality.hpp"

namespace vipaug {

// Principal value of P_corrupted - P_clean per coordinate.
inline RealGrid phase_difference(const ImageTensor& clean, const ImageTensor& corrupted,
                                 DftMode mode) {
  require_same_shape(clean.shape(), corrupted.shape(), "phase_difference");
  const RealGrid a = polar_spectrum(clean, mode).phase;
  const RealGrid b = polar_spectrum(corrupted, mode).phase;
  RealGrid out(a.shape());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = wrap_phase(b[i] - a[i]);
  return out;
}

// For each threshold, the number of coordinates whose wrapped phase change
// exceeds it strictly.
inline std::vector<std::size_t> count_phase_fluctuations(const ImageTensor& clean,
                                                         const ImageTensor& corrupted,
                                                         std::span<const double> thresholds,
                                                         DftMode mode = DftMode::three_d) {
  for (double t : thresholds) {
    if (!(t >= 0.0)) throw InvalidInput("fluctuation thresholds must be non-negative");
  }
  const RealGrid delta = phase_difference(clean, corrupted, mode);
  std::vector<std::size_t> counts(thresholds.size(), 0);
  for (double d : delta) {
    const double mag = std::abs(d);
    for (std::size_t k = 0; k < thresholds.size(); ++k) {
      if (mag > thresholds[k]) ++counts[k];
    }
  }
  return counts;
}

inline std::size_t count_phase_fluctuations(const ImageTensor& clean,
                                            const ImageTensor& corrupted, double threshold,
                                            DftMode mode = DftMode::three_d) {
  const double t[] = {threshold};
  return count_phase_fluctuations(clean, corrupted, t, mode)[0];
}

// What happens to coordinates outside the keep mask.
enum class AblationFill {
  zero_phase,        // keep the amplitude, set the angle to 0
  zero_coefficient,  // drop the coefficient entirely
};

inline PolarSpectrum phase_ablation_spectrum(const ImageTensor& image, const PhaseMask& keep,
                                             DftMode mode,
                                             AblationFill fill = AblationFill::zero_phase) {
  require_same_shape(image.shape(), keep.shape(), "phase_ablation");
  PolarSpectrum polar = polar_spectrum(image, mode);
  for (std::size_t i = 0; i < polar.phase.size(); ++i) {
    if (keep.contains(i)) continue;
    polar.phase[i] = 0.0;
    if (fill == AblationFill::zero_coefficient) polar.amplitude[i] = 0.0;
  }
  return polar;
}

// Image rebuilt from the original amplitude with only the kept phases.
inline ImageTensor phase_ablation_reconstruct(const ImageTensor& image, const PhaseMask& keep,
                                              DftMode mode,
                                              AblationFill fill = AblationFill::zero_phase) {
  const PolarSpectrum polar = phase_ablation_spectrum(image, keep, mode, fill);
  return clamp_unit(idft(from_polar(polar), mode));
}

// As many coordinates as `reference` marks, drawn uniformly from outside it.
inline PhaseMask random_equal_size_mask(const PhaseMask& reference, RngStream& rng) {
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < reference.bits.size(); ++i) {
    if (!reference.contains(i)) pool.push_back(i);
  }
  const std::size_t want = std::min(reference.count(), pool.size());
  PhaseMask out = empty_mask(reference.shape());
  out.filter_size = reference.filter_size;
  for (std::size_t k = 0; k < want; ++k) {
    const std::size_t j = k + rng.uniform_index(pool.size() - k);
    std::swap(pool[k], pool[j]);
    out.bits[pool[k]] = 1;
  }
  return out;
}

inline constexpr std::size_t kSeverities = 5;

// Error percentages per (corruption, severity 1..5).
struct CorruptionErrorTable {
  std::string network_name;
  std::vector<std::string> corruptions;
  std::vector<std::array<double, kSeverities>> errors;
};

// Reads `corruption,s1,s2,s3,s4,s5` CSV.
inline CorruptionErrorTable read_corruption_csv(std::istream& in, std::string network_name) {
  CorruptionErrorTable table{std::move(network_name), {}, {}};
  std::string line;
  const auto trim = [](std::string s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
    std::size_t b = 0;
    while (b < s.size() && s[b] == ' ') ++b;
    return s.substr(b);
  };
  if (!std::getline(in, line) || trim(line) != "corruption,s1,s2,s3,s4,s5") {
    throw InvalidInput("error table must start with header corruption,s1,s2,s3,s4,s5");
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (fields.size() != 1 + kSeverities) {
      throw InvalidInput("line " + std::to_string(line_no) + ": expected 6 fields");
    }
    std::array<double, kSeverities> row{};
    for (std::size_t s = 0; s < kSeverities; ++s) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(fields[s + 1], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != fields[s + 1].size() || fields[s + 1].empty()) {
        throw InvalidInput("line " + std::to_string(line_no) + ": bad number '" +
                           fields[s + 1] + "'");
      }
      if (!(v >= 0.0 && v <= 100.0)) {
        throw InvalidInput("line " + std::to_string(line_no) + ": error outside [0, 100]");
      }
      row[s] = v;
    }
    table.corruptions.push_back(fields[0]);
    table.errors.push_back(row);
  }
  return table;
}

struct MceResult {
  std::vector<std::pair<std::string, double>> ce;  // percent, in network table order
  double mce = 0.0;
};

// CE_c = 100 * sum_s E_net(s, c) / sum_s E_ref(s, c); mCE is the mean CE.
inline MceResult compute_mce(const CorruptionErrorTable& network,
                             const CorruptionErrorTable& reference) {
  std::map<std::string, std::size_t> ref_rows;
  for (std::size_t i = 0; i < reference.corruptions.size(); ++i) {
    ref_rows[reference.corruptions[i]] = i;
  }
  if (network.corruptions.empty() || ref_rows.size() != network.corruptions.size() ||
      reference.corruptions.size() != network.corruptions.size()) {
    throw InvalidInput("network and reference tables cover different corruptions");
  }
  MceResult result;
  for (std::size_t i = 0; i < network.corruptions.size(); ++i) {
    const auto it = ref_rows.find(network.corruptions[i]);
    if (it == ref_rows.end()) {
      throw InvalidInput("reference table lacks corruption '" + network.corruptions[i] + "'");
    }
    const auto& net = network.errors[i];
    const auto& ref = reference.errors[it->second];
    const double num = std::accumulate(net.begin(), net.end(), 0.0);
    const double den = std::accumulate(ref.begin(), ref.end(), 0.0);
    if (den == 0.0) {
      throw InvalidInput("reference errors for '" + network.corruptions[i] + "' sum to zero");
    }
    result.ce.emplace_back(network.corruptions[i], 100.0 * num / den);
  }
  double total = 0.0;
  for (const auto& [name, ce] : result.ce) total += ce;
  result.mce = total / static_cast<double>(result.ce.size());
  return result;
}

}  // namespace vipaug
