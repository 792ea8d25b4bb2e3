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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vipaug/grid.hpp"
#include "vipaug/spectrum.hpp"

namespace vipaug::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfigError = 2,
  kIoError = 3,
};

struct AugmentOptions {
  std::filesystem::path in_dir;
  std::filesystem::path out_dir;
  std::filesystem::path config_path;
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
  std::optional<std::filesystem::path> pool;  // pool directory or cache file
};

// Augments every PNG/JPEG in in_dir once and writes <stem>.png plus
// manifest.json to out_dir. Outputs written by a failed run are removed.
int cmd_augment(const AugmentOptions& options, std::ostream& err);

// Re-runs the run recorded in a manifest into out_dir and checks that every
// recorded stage decision is reproduced.
int cmd_replay(const std::filesystem::path& manifest, const std::filesystem::path& out_dir,
               unsigned workers, std::ostream& err);

struct PoolBuildOptions {
  std::filesystem::path dir;
  std::filesystem::path cache_out;
  Shape shape{32, 32, 3};
  DftMode mode = DftMode::three_d;
};

int cmd_pool_build(const PoolBuildOptions& options, std::ostream& err);

struct InspectOptions {
  std::filesystem::path image;
  std::filesystem::path config_path;
  std::filesystem::path out_png;
  std::optional<std::filesystem::path> pool;
  std::optional<std::filesystem::path> partner;
  std::optional<std::uint64_t> seed;
};

// Writes a 1x6 panel strip: original | vital-only | non-vital-only |
// VIPAug-G | VIPAug-F | full pipeline.
int cmd_inspect(const InspectOptions& options, std::ostream& err);

inline constexpr std::size_t kInspectPanels = 6;

// CSV `file,threshold,count` for every file present in both directories,
// followed by `mean` rows averaging each threshold over the pairs.
int cmd_fluct(const std::filesystem::path& clean_dir, const std::filesystem::path& corrupted_dir,
              const std::vector<double>& thresholds, DftMode mode, std::ostream& out,
              std::ostream& err);

// Prints `corruption,ce` rows and a final `mCE` row, in percent.
int cmd_mce(const std::filesystem::path& network_csv,
            const std::filesystem::path& reference_csv, std::ostream& out, std::ostream& err);

// Entry point used by main(): parses argv and dispatches.
int run(int argc, char** argv);

}  // namespace vipaug::cli
