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

#include "commands.hpp"

#include <gtest/gtest.h>

#include <json.hpp>
#include <sstream>

#include "fixtures.hpp"
#include "vipaug/analyzer.hpp"
#include "vipaug/pool.hpp"

namespace vipaug::cli {
namespace {

namespace fs = std::filesystem;
using testing::dir_contents;
using testing::kDisabledConfig;
using testing::kFullConfig;
using testing::read_bytes;
using testing::ScratchDir;
using testing::write_dataset;
using testing::write_text;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    write_dataset(root / "in", 10, Shape{32, 32, 3}, 100);
    write_dataset(root / "pool", 3, Shape{40, 40, 3}, 900);
    write_text(root / "full.json", kFullConfig);
    write_text(root / "off.json", kDisabledConfig);
  }

  int augment(const std::string& out, const std::string& config, unsigned workers,
              bool with_pool = true) {
    AugmentOptions o;
    o.in_dir = root / "in";
    o.out_dir = root / out;
    o.config_path = root / config;
    o.workers = workers;
    if (with_pool) o.pool = root / "pool";
    return cmd_augment(o, err);
  }

  ScratchDir root{"cli"};
  std::ostringstream err;
};

TEST_F(CliTest, WorkerCountDoesNotChangeOutputBytes) {
  ASSERT_EQ(augment("w1", "full.json", 1), kOk) << err.str();
  ASSERT_EQ(augment("w4", "full.json", 4), kOk) << err.str();
  ASSERT_EQ(augment("w8", "full.json", 8), kOk) << err.str();
  const auto a = dir_contents(root / "w1");
  EXPECT_EQ(a.size(), 11u);  // 10 images + manifest
  EXPECT_EQ(a, dir_contents(root / "w4"));
  EXPECT_EQ(a, dir_contents(root / "w8"));
}

TEST_F(CliTest, ManifestRecordsStages) {
  ASSERT_EQ(augment("out", "full.json", 2), kOk) << err.str();
  const auto m = nlohmann::json::parse(read_bytes(root / "out" / "manifest.json"));
  EXPECT_EQ(m["seed"], 7);
  ASSERT_EQ(m["files"].size(), 10u);
  std::size_t fractal = 0;
  for (std::size_t i = 0; i < 10; ++i) {
    const auto& f = m["files"][i];
    EXPECT_EQ(f["sample_index"], i);
    EXPECT_NE(f["partner"], i);
    EXPECT_EQ(f["output"], f["input"]);
    fractal += f["stages"]["fractal"].get<bool>();
    EXPECT_EQ(f["fractal_index"].is_null(), !f["stages"]["fractal"].get<bool>());
  }
  EXPECT_GT(fractal, 0u);
  EXPECT_LT(fractal, 10u);
}

TEST_F(CliTest, SeedOverrideChangesOutput) {
  ASSERT_EQ(augment("a", "full.json", 1), kOk);
  AugmentOptions o{root / "in", root / "b", root / "full.json", 8, 1, root / "pool"};
  ASSERT_EQ(cmd_augment(o, err), kOk);
  EXPECT_NE(read_bytes(root / "a" / "img_00.png"), read_bytes(root / "b" / "img_00.png"));
}

TEST_F(CliTest, DisabledConfigReproducesInputs) {
  ASSERT_EQ(augment("off", "off.json", 3, false), kOk) << err.str();
  for (const auto& e : fs::directory_iterator(root / "in")) {
    const auto in = read_image(e.path());
    const auto out = read_image(root / "off" / e.path().filename());
    ASSERT_TRUE(in && out);
    EXPECT_LE(testing::max_abs_diff(in->values(), out->values()), 1.0 / 255.0 + 1e-12);
  }
}

TEST_F(CliTest, ReplayIsBitwiseIdentical) {
  ASSERT_EQ(augment("orig", "full.json", 4), kOk) << err.str();
  ASSERT_EQ(cmd_replay(root / "orig" / "manifest.json", root / "again", 1, err), kOk)
      << err.str();
  EXPECT_EQ(dir_contents(root / "orig"), dir_contents(root / "again"));
}

TEST_F(CliTest, ReplayDetectsTamperedManifest) {
  ASSERT_EQ(augment("orig", "full.json", 1), kOk) << err.str();
  auto m = nlohmann::json::parse(read_bytes(root / "orig" / "manifest.json"));
  m["files"][0]["stages"]["amplitude_swap"] = !m["files"][0]["stages"]["amplitude_swap"].get<bool>();
  write_text(root / "tampered.json", m.dump());
  EXPECT_EQ(cmd_replay(root / "tampered.json", root / "again", 1, err), kFailure);
  write_text(root / "broken.json", "{");
  EXPECT_EQ(cmd_replay(root / "broken.json", root / "again2", 1, err), kConfigError);
}

TEST_F(CliTest, ConfigErrorsExitTwoWithoutOutput) {
  write_text(root / "bad.json", R"({"sigma_vital": -1})");
  EXPECT_EQ(augment("bad", "bad.json", 1), kConfigError);
  EXPECT_FALSE(fs::exists(root / "bad"));
  write_text(root / "typo.json", R"({"sigma_vitall": 0.1})");
  EXPECT_EQ(augment("typo", "typo.json", 1), kConfigError);
  EXPECT_EQ(augment("nopool", "full.json", 1, false), kConfigError);
  EXPECT_FALSE(fs::exists(root / "nopool"));
}

TEST_F(CliTest, IoErrorsExitThreeAndCleanUp) {
  EXPECT_EQ(augment("x", "missing.json", 1), kIoError);
  // A mismatched image midway through the batch aborts the run.
  write_png(root / "in" / "img_05.png", testing::random_image(Shape{16, 16, 3}, 1));
  EXPECT_EQ(augment("partial", "full.json", 1), kIoError);
  EXPECT_FALSE(fs::exists(root / "partial"));
  fs::create_directories(root / "existing");
  write_text(root / "existing" / "keep.txt", "mine");
  EXPECT_EQ(augment("existing", "full.json", 4), kIoError);
  EXPECT_EQ(dir_contents(root / "existing").size(), 1u);
  AugmentOptions o{root / "nowhere", root / "o", root / "full.json", {}, 1, root / "pool"};
  EXPECT_EQ(cmd_augment(o, err), kIoError);
}

TEST_F(CliTest, PoolBuildWritesReadableCache) {
  PoolBuildOptions o{root / "pool", root / "pool.bin", Shape{32, 32, 3}, DftMode::three_d};
  ASSERT_EQ(cmd_pool_build(o, err), kOk) << err.str();
  std::ifstream in(root / "pool.bin", std::ios::binary);
  const FractalPool pool = read_pool_cache(in, DftMode::three_d);
  EXPECT_EQ(pool.count(), 3u);
  o.cache_out = root / "pool2.bin";
  ASSERT_EQ(cmd_pool_build(o, err), kOk);
  EXPECT_EQ(read_bytes(root / "pool.bin"), read_bytes(root / "pool2.bin"));

  // A cache file and its source directory drive augment identically.
  ASSERT_EQ(augment("from_dir", "full.json", 1), kOk);
  AugmentOptions a{root / "in", root / "from_cache", root / "full.json", {}, 1, root / "pool.bin"};
  ASSERT_EQ(cmd_augment(a, err), kOk) << err.str();
  auto x = dir_contents(root / "from_dir"), y = dir_contents(root / "from_cache");
  x.erase("manifest.json");
  y.erase("manifest.json");
  EXPECT_EQ(x, y);

  o.dir = root / "empty";
  fs::create_directories(o.dir);
  EXPECT_EQ(cmd_pool_build(o, err), kIoError);
}

TEST_F(CliTest, InspectWritesSixPanelStrip) {
  InspectOptions o;
  o.image = root / "in" / "img_03.png";
  o.config_path = root / "full.json";
  o.out_png = root / "strip.png";
  o.pool = root / "pool";
  ASSERT_EQ(cmd_inspect(o, err), kOk) << err.str();
  const auto strip = read_image(o.out_png);
  ASSERT_TRUE(strip);
  EXPECT_EQ(strip->shape(), (Shape{32, 32 * kInspectPanels, 3}));
  const ImageTensor img = *read_image(o.image);
  const PolarSpectrum p = polar_spectrum(img, DftMode::three_d);
  const ImageTensor vital_only =
      phase_ablation_reconstruct(img, detect_vital(p.amplitude, 2), DftMode::three_d);
  double err_first = 0.0, err_second = 0.0;
  for (std::size_t x = 0; x < 32; ++x) {
    for (std::size_t y = 0; y < 32; ++y) {
      for (std::size_t z = 0; z < 3; ++z) {
        err_first = std::max(err_first, std::abs((*strip)(x, y, z) - img(x, y, z)));
        err_second = std::max(err_second, std::abs((*strip)(x, 32 + y, z) - vital_only(x, y, z)));
      }
    }
  }
  EXPECT_EQ(err_first, 0.0);
  EXPECT_LE(err_second, 0.5 / 255.0 + 1e-12);
}

TEST_F(CliTest, FluctReportsCountsAndMeans) {
  std::ostringstream out;
  const std::vector<double> ts = {0.1, 1.0};
  ASSERT_EQ(cmd_fluct(root / "in", root / "in", ts, DftMode::three_d, out, err), kOk);
  std::istringstream lines(out.str());
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "file,threshold,count");
  std::size_t rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    EXPECT_EQ(line.substr(line.rfind(',') + 1), "0") << line;
  }
  EXPECT_EQ(rows, 10u * 2 + 2);

  // Mean row against per-pair counts.
  ASSERT_EQ(augment("aug", "off.json", 1, false), kOk);
  write_dataset(root / "noisy", 10, Shape{32, 32, 3}, 500);
  std::ostringstream out2;
  const std::vector<double> t1 = {0.5};
  ASSERT_EQ(cmd_fluct(root / "in", root / "noisy", t1, DftMode::three_d, out2, err), kOk);
  double total = 0.0;
  for (const auto& e : fs::directory_iterator(root / "in")) {
    total += static_cast<double>(count_phase_fluctuations(
        *read_image(e.path()), *read_image(root / "noisy" / e.path().filename()), 0.5));
  }
  const std::string text = out2.str();
  const std::string mean = text.substr(text.find("mean,0.5,") + 9);
  EXPECT_NEAR(std::stod(mean), total / 10.0, 1e-6);

  fs::remove(root / "noisy" / "img_04.png");
  EXPECT_EQ(cmd_fluct(root / "in", root / "noisy", t1, DftMode::three_d, out2, err), kIoError);
}

TEST_F(CliTest, MceReportsTable) {
  write_text(root / "net.csv", "corruption,s1,s2,s3,s4,s5\ngauss,50,50,50,50,50\nshot,30,30,30,30,30\n");
  write_text(root / "ref.csv", "corruption,s1,s2,s3,s4,s5\nshot,60,60,60,60,60\ngauss,100,100,100,100,100\n");
  std::ostringstream out;
  ASSERT_EQ(cmd_mce(root / "net.csv", root / "ref.csv", out, err), kOk) << err.str();
  EXPECT_EQ(out.str(), "corruption,ce\ngauss,50.0\nshot,50.0\nmCE,50.0\n");
  write_text(root / "bad.csv", "corruption,s1\n");
  EXPECT_EQ(cmd_mce(root / "bad.csv", root / "ref.csv", out, err), kIoError);
  EXPECT_EQ(cmd_mce(root / "missing.csv", root / "ref.csv", out, err), kIoError);
}

TEST(CliParse, UsageErrorsExitTwo) {
  const auto call = [](std::vector<std::string> args) {
    args.insert(args.begin(), "vipaug");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return run(static_cast<int>(argv.size()), argv.data());
  };
  EXPECT_EQ(call({}), kConfigError);
  EXPECT_EQ(call({"augment", "only_one"}), kConfigError);
  EXPECT_EQ(call({"pool-build", "d", "c", "--shape", "32x32"}), kConfigError);
  EXPECT_EQ(call({"fluct", "a", "b", "--dft-mode", "4d"}), kConfigError);
  EXPECT_EQ(call({"--help"}), kOk);
}

}  // namespace
}  // namespace vipaug::cli
