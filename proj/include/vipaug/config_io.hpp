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

// JSON (de)serialization of AugmentConfig. Keys are exactly the field names;
// unknown keys are rejected and missing keys keep their defaults.

#include <set>
#include <string>

#include <json.hpp>

#include "vipaug/config.hpp"

namespace vipaug {

inline nlohmann::ordered_json config_to_json(const AugmentConfig& c) {
  nlohmann::ordered_json j;
  j["sigma_vital"] = c.sigma_vital;
  j["sigma_nonvital"] = c.sigma_nonvital;
  j["filter_size"] = c.filter_size;
  j["low_freq_ratio"] = c.low_freq_ratio;
  j["p_fractal"] = c.p_fractal;
  j["p_amplitude_swap"] = c.p_amplitude_swap;
  j["dft_mode"] = to_string(c.dft_mode);
  j["variant"] = to_string(c.variant);
  j["pixel_ops"] = nlohmann::ordered_json::array();
  for (const auto& op : c.pixel_ops) {
    j["pixel_ops"].push_back({{"name", op.name}, {"min", op.min}, {"max", op.max}});
  }
  j["seed"] = c.seed;
  return j;
}

inline AugmentConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> kKeys = {
      "sigma_vital", "sigma_nonvital", "filter_size", "low_freq_ratio", "p_fractal",
      "p_amplitude_swap", "dft_mode", "variant", "pixel_ops", "seed"};
  for (const auto& [key, value] : j.items()) {
    if (!kKeys.contains(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  AugmentConfig c;
  try {
    const auto number = [&](const char* key, double& dst) {
      if (!j.contains(key)) return;
      if (!j[key].is_number()) throw ConfigError(std::string(key) + " must be a number");
      dst = j[key].get<double>();
    };
    number("sigma_vital", c.sigma_vital);
    number("sigma_nonvital", c.sigma_nonvital);
    number("low_freq_ratio", c.low_freq_ratio);
    number("p_fractal", c.p_fractal);
    number("p_amplitude_swap", c.p_amplitude_swap);
    if (j.contains("filter_size")) {
      if (!j["filter_size"].is_number_unsigned()) {
        throw ConfigError("filter_size must be a positive integer");
      }
      c.filter_size = j["filter_size"].get<std::size_t>();
    }
    if (j.contains("dft_mode")) c.dft_mode = parse_dft_mode(j["dft_mode"].get<std::string>());
    if (j.contains("variant")) c.variant = parse_variant(j["variant"].get<std::string>());
    if (j.contains("seed")) {
      if (!j["seed"].is_number_unsigned()) throw ConfigError("seed must be an unsigned integer");
      c.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("pixel_ops")) {
      if (!j["pixel_ops"].is_array()) throw ConfigError("pixel_ops must be an array");
      c.pixel_ops.clear();
      for (const auto& op : j["pixel_ops"]) {
        PixelOpSpec spec;
        if (op.is_string()) {
          // Bare name: take the default range for that op.
          spec.name = op.get<std::string>();
          for (const auto& d : default_pixel_ops()) {
            if (d.name == spec.name) spec = d;
          }
        } else if (op.is_object()) {
          for (const auto& [key, value] : op.items()) {
            if (key != "name" && key != "min" && key != "max") {
              throw ConfigError("unknown pixel op key '" + key + "'");
            }
          }
          spec.name = op.at("name").get<std::string>();
          spec.min = op.value("min", 0.0);
          spec.max = op.value("max", 0.0);
        } else {
          throw ConfigError("pixel_ops entries must be names or objects");
        }
        c.pixel_ops.push_back(spec);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  validate(c);
  return c;
}

inline AugmentConfig parse_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_json(j);
}

}  // namespace vipaug
