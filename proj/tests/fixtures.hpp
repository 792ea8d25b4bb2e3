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

#ifndef VIPAUG_TESTS_FIXTURES_HPP_
#define VIPAUG_TESTS_FIXTURES_HPP_

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <string>
#include <unistd.h>

#include "test_util.hpp"
#include "vipaug/image_io.hpp"

namespace vipaug::testing {

namespace fs = std::filesystem;

// Scratch directory removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = fs::temp_directory_path() /
            ("vipaug_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& leaf) const { return path_ / leaf; }

 private:
  fs::path path_;
};

inline std::string read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_text(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

// filename -> contents for every regular file in `dir`.
inline std::map<std::string, std::string> dir_contents(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file()) out[e.path().filename().string()] = read_bytes(e.path());
  }
  return out;
}

// `count` random PNGs named img_00.png, img_01.png, ...
inline void write_dataset(const fs::path& dir, std::size_t count, const Shape& shape,
                          std::uint64_t seed) {
  fs::create_directories(dir);
  for (std::size_t i = 0; i < count; ++i) {
    const std::string name = (i < 10 ? "img_0" : "img_") + std::to_string(i) + ".png";
    write_png(dir / name, random_image(shape, seed + i));
  }
}

inline const char* kFullConfig = R"({
  "sigma_vital": 0.001, "sigma_nonvital": 0.014, "filter_size": 2,
  "low_freq_ratio": 0.4444444444444444, "p_fractal": 0.5, "p_amplitude_swap": 0.5,
  "dft_mode": "3d", "variant": "standard", "seed": 7
})";

inline const char* kDisabledConfig = R"({
  "sigma_vital": 0, "sigma_nonvital": 0, "low_freq_ratio": 0, "p_fractal": 0,
  "p_amplitude_swap": 0, "pixel_ops": ["identity"], "seed": 1
})";

}  // namespace vipaug::testing

#endif  // VIPAUG_TESTS_FIXTURES_HPP_
