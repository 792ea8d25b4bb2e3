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

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <utility>

#include <CLI11.hpp>
#include <json.hpp>

#include "vipaug/analyzer.hpp"
#include "vipaug/batch.hpp"
#include "vipaug/config_io.hpp"
#include "vipaug/image_io.hpp"

namespace vipaug::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

// Carries an exit code through the command bodies.
struct CommandError {
  int code;
  std::string message;
};

[[noreturn]] void fail(int code, std::string message) {
  throw CommandError{code, std::move(message)};
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const CommandError& e) {
    err << "error: " << e.message << '\n';
    return e.code;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(kIoError, "cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

AugmentConfig load_config(const fs::path& path) {
  std::ifstream probe(path);
  if (!probe) fail(kIoError, "cannot open config '" + path.string() + "'");
  return parse_config(read_text(path));
}

std::vector<fs::path> list_images(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) fail(kIoError, "'" + dir.string() + "' is not a directory");
  std::vector<fs::path> files;
  for (const auto& item : fs::directory_iterator(dir)) {
    if (item.is_regular_file() && has_image_extension(item.path())) files.push_back(item.path());
  }
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
  return files;
}

ImageTensor load_image(const fs::path& path) {
  std::optional<ImageTensor> img = read_image(path, 3);
  if (!img) fail(kIoError, "cannot decode image '" + path.string() + "'");
  return std::move(*img);
}

std::optional<FractalPool> load_pool(const std::optional<fs::path>& path, const Shape& shape,
                                     DftMode mode) {
  if (!path) return std::nullopt;
  std::error_code ec;
  if (fs::is_directory(*path, ec)) return build_pool(*path, shape, mode, read_image);
  std::ifstream in(*path, std::ios::binary);
  if (!in) fail(kIoError, "cannot open pool '" + path->string() + "'");
  return read_pool_cache(in, mode);
}

std::string absolute_string(const fs::path& p) { return fs::absolute(p).lexically_normal().string(); }

struct FileRecord {
  std::string input;
  std::string output;
  std::size_t partner = 0;
  SampleResult result;
};

// Shared by augment and replay. Returns the manifest that was written.
ordered_json run_augment(const AugmentConfig& config, std::uint64_t seed, const fs::path& in_dir,
                         const fs::path& out_dir, const std::optional<fs::path>& pool_path,
                         unsigned workers) {
  const std::vector<fs::path> inputs = list_images(in_dir);
  if (inputs.empty()) fail(kIoError, "no PNG/JPEG images in '" + in_dir.string() + "'");
  std::vector<std::string> out_names;
  std::set<std::string> seen;
  for (const auto& p : inputs) {
    std::string name = p.stem().string() + ".png";
    if (!seen.insert(name).second) fail(kIoError, "two inputs map to output '" + name + "'");
    out_names.push_back(std::move(name));
  }

  const Shape shape = load_image(inputs.front()).shape();
  std::optional<FractalPool> pool = load_pool(pool_path, shape, config.dft_mode);
  if (pool) require_pool_matches(*pool, shape, config);
  if (!pool && config.p_fractal > 0.0) {
    fail(kConfigError, "p_fractal > 0 needs a fractal pool (--pool)");
  }

  std::error_code ec;
  const bool created_dir = !fs::exists(out_dir, ec);
  fs::create_directories(out_dir, ec);
  if (ec) fail(kIoError, "cannot create '" + out_dir.string() + "': " + ec.message());

  const std::size_t n = inputs.size();
  std::vector<std::optional<FileRecord>> records(n);
  std::vector<fs::path> written;
  std::mutex mu;
  std::exception_ptr first_error;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};

  const auto work = [&] {
    while (!failed.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) break;
      try {
        const ImageTensor image = load_image(inputs[i]);
        if (image.shape() != shape) {
          fail(kIoError, "'" + inputs[i].filename().string() + "' has shape " +
                             to_string(image.shape()) + ", batch shape is " + to_string(shape));
        }
        const std::size_t partner_index = choose_partner(n, seed, i);
        const ImageTensor partner =
            partner_index == i ? image : load_image(inputs[partner_index]);
        if (partner.shape() != shape) {
          fail(kIoError, "'" + inputs[partner_index].filename().string() +
                             "' does not match the batch shape");
        }
        SampleResult result =
            augment_sample(image, partner, pool ? &*pool : nullptr, config, seed, i);
        const fs::path out_path = out_dir / out_names[i];
        {
          std::lock_guard lock(mu);
          written.push_back(out_path);
        }
        if (!write_png(out_path, result.image)) {
          fail(kIoError, "cannot write '" + out_path.string() + "'");
        }
        records[i] = FileRecord{inputs[i].filename().string(), out_names[i], partner_index,
                                std::move(result)};
      } catch (...) {
        std::lock_guard lock(mu);
        if (!first_error) first_error = std::current_exception();
        failed = true;
      }
    }
  };

  const unsigned threads = static_cast<unsigned>(
      std::max<std::size_t>(1, std::min<std::size_t>(std::max(workers, 1u), n)));
  {
    std::vector<std::jthread> pool_threads;
    for (unsigned t = 0; t + 1 < threads; ++t) pool_threads.emplace_back(work);
    work();
  }

  const fs::path manifest_path = out_dir / "manifest.json";
  const auto cleanup = [&] {
    std::error_code rm;
    for (const auto& p : written) fs::remove(p, rm);
    fs::remove(manifest_path, rm);
    if (created_dir && fs::is_empty(out_dir, rm)) fs::remove(out_dir, rm);
  };
  if (failed) {
    cleanup();
    std::rethrow_exception(first_error);
  }

  AugmentConfig snapshot = config;
  snapshot.seed = seed;
  ordered_json manifest;
  manifest["version"] = 1;
  manifest["seed"] = seed;
  manifest["input_dir"] = absolute_string(in_dir);
  manifest["pool"] = pool_path ? ordered_json(absolute_string(*pool_path)) : ordered_json(nullptr);
  manifest["config"] = config_to_json(snapshot);
  manifest["files"] = ordered_json::array();
  for (std::size_t i = 0; i < n; ++i) {
    const FileRecord& r = *records[i];
    ordered_json f;
    f["input"] = r.input;
    f["output"] = r.output;
    f["sample_index"] = i;
    f["partner"] = inputs[r.partner].filename().string();
    f["stages"] = {{"fractal", r.result.fractal_applied},
                   {"pixel_op", r.result.pixel_op.name},
                   {"pixel_magnitude", r.result.pixel_op.magnitude},
                   {"amplitude_swap", r.result.amplitude_swapped}};
    f["fractal_index"] =
        r.result.fractal_index ? ordered_json(*r.result.fractal_index) : ordered_json(nullptr);
    manifest["files"].push_back(std::move(f));
  }
  std::ofstream out(manifest_path, std::ios::binary);
  out << manifest.dump(2) << '\n';
  if (!out) {
    cleanup();
    fail(kIoError, "cannot write manifest '" + manifest_path.string() + "'");
  }
  return manifest;
}

DftMode parse_mode_flag(const std::string& s) {
  try {
    return parse_dft_mode(s);
  } catch (const ConfigError& e) {
    fail(kConfigError, e.what());
  }
}

Shape parse_shape(const std::string& s) {
  Shape shape;
  char x1 = 0, x2 = 0;
  std::istringstream in(s);
  if (!(in >> shape.height >> x1 >> shape.width >> x2 >> shape.channels) || x1 != 'x' ||
      x2 != 'x' || !in.eof() || shape.empty()) {
    fail(kConfigError, "shape must look like HxWxC, got '" + s + "'");
  }
  return shape;
}

}  // namespace

int cmd_augment(const AugmentOptions& options, std::ostream& err) {
  return guarded(err, [&] {
    const AugmentConfig config = load_config(options.config_path);
    const std::uint64_t seed = options.seed.value_or(config.seed);
    run_augment(config, seed, options.in_dir, options.out_dir, options.pool, options.workers);
    return static_cast<int>(kOk);
  });
}

int cmd_replay(const fs::path& manifest_path, const fs::path& out_dir, unsigned workers,
               std::ostream& err) {
  return guarded(err, [&] {
    nlohmann::json manifest;
    try {
      manifest = nlohmann::json::parse(read_text(manifest_path));
    } catch (const nlohmann::json::exception& e) {
      fail(kConfigError, std::string("manifest is not valid JSON: ") + e.what());
    }
    AugmentConfig config;
    std::uint64_t seed = 0;
    fs::path in_dir;
    std::optional<fs::path> pool;
    try {
      config = config_from_json(manifest.at("config"));
      seed = manifest.at("seed").get<std::uint64_t>();
      in_dir = manifest.at("input_dir").get<std::string>();
      if (!manifest.at("pool").is_null()) pool = manifest.at("pool").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      fail(kConfigError, std::string("malformed manifest: ") + e.what());
    }
    const ordered_json produced = run_augment(config, seed, in_dir, out_dir, pool, workers);
    if (nlohmann::json(produced.at("files")) != manifest.at("files")) {
      fail(kFailure, "replay diverged from the recorded manifest");
    }
    return static_cast<int>(kOk);
  });
}

int cmd_pool_build(const PoolBuildOptions& options, std::ostream& err) {
  return guarded(err, [&] {
    const FractalPool pool = build_pool(options.dir, options.shape, options.mode, read_image,
                                        [&err](const std::string& m) { err << "warning: " << m << '\n'; });
    std::ofstream out(options.cache_out, std::ios::binary);
    if (!out) fail(kIoError, "cannot open '" + options.cache_out.string() + "'");
    write_pool_cache(pool, out);
    out.close();
    if (!out) {
      std::error_code ec;
      fs::remove(options.cache_out, ec);
      fail(kIoError, "cannot write '" + options.cache_out.string() + "'");
    }
    return static_cast<int>(kOk);
  });
}

int cmd_inspect(const InspectOptions& options, std::ostream& err) {
  return guarded(err, [&] {
    AugmentConfig config = load_config(options.config_path);
    const std::uint64_t seed = options.seed.value_or(config.seed);
    const ImageTensor image = load_image(options.image);
    const ImageTensor partner = options.partner ? load_image(*options.partner) : image;
    if (partner.shape() != image.shape()) fail(kIoError, "partner shape differs from image");
    std::optional<FractalPool> pool = load_pool(options.pool, image.shape(), config.dft_mode);
    if (!pool && config.p_fractal > 0.0) {
      fail(kConfigError, "p_fractal > 0 needs a fractal pool (--pool)");
    }

    const DftMode mode = config.dft_mode;
    const SampleTrace st = trace_sample(image, partner, pool ? &*pool : nullptr, config, seed, 0);
    const VipaugTrace& tr = st.trace;
    const RealGrid& amplitude = tr.original.amplitude;

    const PhaseMask nonvital = config.filter_size >= 2
                                   ? rank_mask(amplitude, config.filter_size, 2)
                                   : empty_mask(image.shape());
    const auto [sigma_vital, sigma_nonvital] = effective_sigmas(config);
    RngStream gauss = RngStream::for_sample(seed, 0).substream(streams::kGaussian);
    const RealGrid g_only =
        vipaug_g(tr.original.phase, tr.preserved, sigma_vital, sigma_nonvital, gauss);

    const std::vector<ImageTensor> panels = {
        image,
        phase_ablation_reconstruct(image, tr.vital, mode),
        phase_ablation_reconstruct(image, nonvital, mode),
        clamp_unit(reconstruct(amplitude, g_only, mode)),
        clamp_unit(reconstruct(amplitude, tr.phase_after_f, mode)),
        tr.image,
    };
    const Shape s = image.shape();
    ImageTensor strip(Shape{s.height, s.width * panels.size(), s.channels});
    for (std::size_t p = 0; p < panels.size(); ++p) {
      for (std::size_t x = 0; x < s.height; ++x) {
        for (std::size_t y = 0; y < s.width; ++y) {
          for (std::size_t z = 0; z < s.channels; ++z) {
            strip(x, p * s.width + y, z) = panels[p](x, y, z);
          }
        }
      }
    }
    if (!write_png(options.out_png, strip)) {
      fail(kIoError, "cannot write '" + options.out_png.string() + "'");
    }
    return static_cast<int>(kOk);
  });
}

int cmd_fluct(const fs::path& clean_dir, const fs::path& corrupted_dir,
              const std::vector<double>& thresholds, DftMode mode, std::ostream& out,
              std::ostream& err) {
  return guarded(err, [&] {
    if (thresholds.empty()) fail(kConfigError, "at least one threshold is required");
    for (double t : thresholds) {
      if (!(t >= 0.0)) fail(kConfigError, "thresholds must be non-negative");
    }
    const std::vector<fs::path> clean = list_images(clean_dir);
    if (clean.empty()) fail(kIoError, "no images in '" + clean_dir.string() + "'");
    std::vector<double> sums(thresholds.size(), 0.0);
    std::ostringstream rows;
    for (const auto& path : clean) {
      const fs::path other = corrupted_dir / path.filename();
      std::error_code ec;
      if (!fs::exists(other, ec)) {
        fail(kIoError, "'" + path.filename().string() + "' has no counterpart in '" +
                           corrupted_dir.string() + "'");
      }
      const ImageTensor a = load_image(path);
      const ImageTensor b = load_image(other);
      if (a.shape() != b.shape()) {
        fail(kIoError, "'" + path.filename().string() + "' differs in shape between directories");
      }
      const std::vector<std::size_t> counts = count_phase_fluctuations(a, b, thresholds, mode);
      for (std::size_t k = 0; k < thresholds.size(); ++k) {
        rows << path.filename().string() << ',' << thresholds[k] << ',' << counts[k] << '\n';
        sums[k] += static_cast<double>(counts[k]);
      }
    }
    out << "file,threshold,count\n" << rows.str();
    for (std::size_t k = 0; k < thresholds.size(); ++k) {
      out << "mean," << thresholds[k] << ',' << std::setprecision(12)
          << sums[k] / static_cast<double>(clean.size()) << std::setprecision(6) << '\n';
    }
    return static_cast<int>(kOk);
  });
}

int cmd_mce(const fs::path& network_csv, const fs::path& reference_csv, std::ostream& out,
            std::ostream& err) {
  return guarded(err, [&] {
    const auto load = [](const fs::path& p) {
      std::istringstream in(read_text(p));
      try {
        return read_corruption_csv(in, p.stem().string());
      } catch (const InvalidInput& e) {
        fail(kIoError, p.string() + ": " + e.what());
      }
    };
    const CorruptionErrorTable network = load(network_csv);
    const CorruptionErrorTable reference = load(reference_csv);
    MceResult result;
    try {
      result = compute_mce(network, reference);
    } catch (const InvalidInput& e) {
      fail(kIoError, e.what());
    }
    out << "corruption,ce\n" << std::fixed << std::setprecision(1);
    for (const auto& [name, ce] : result.ce) out << name << ',' << ce << '\n';
    out << "mCE," << result.mce << '\n';
    out << std::defaultfloat;
    return static_cast<int>(kOk);
  });
}

int run(int argc, char** argv) {
  CLI::App app{"Frequency-domain phase augmentation: batch augmentation, fractal pools, "
               "diagnostics and corruption-error metrics"};
  app.require_subcommand(1);

  AugmentOptions aug;
  std::string aug_pool;
  std::uint64_t aug_seed = 0;
  auto* augment = app.add_subcommand("augment", "augment every image in a directory");
  augment->add_option("in_dir", aug.in_dir, "input image directory")->required();
  augment->add_option("out_dir", aug.out_dir, "output directory")->required();
  augment->add_option("config", aug.config_path, "JSON config")->required();
  auto* aug_seed_opt = augment->add_option("--seed", aug_seed, "master seed (overrides config)");
  augment->add_option("--workers", aug.workers, "worker threads")->check(CLI::PositiveNumber);
  auto* aug_pool_opt = augment->add_option("--pool", aug_pool, "pool directory or cache file");

  std::string replay_manifest, replay_out;
  unsigned replay_workers = 1;
  auto* replay = app.add_subcommand("replay", "reproduce a run from its manifest");
  replay->add_option("manifest", replay_manifest)->required();
  replay->add_option("out_dir", replay_out)->required();
  replay->add_option("--workers", replay_workers)->check(CLI::PositiveNumber);

  PoolBuildOptions pb;
  std::string pb_shape = "32x32x3", pb_mode = "3d";
  auto* pool_build = app.add_subcommand("pool-build", "cache the phase spectra of an image pool");
  pool_build->add_option("dir", pb.dir, "pool image directory")->required();
  pool_build->add_option("cache_out", pb.cache_out, "cache file to write")->required();
  pool_build->add_option("--shape", pb_shape, "canonical HxWxC")->capture_default_str();
  pool_build->add_option("--dft-mode", pb_mode, "3d or 2d")->capture_default_str();

  InspectOptions ins;
  std::string ins_pool, ins_partner;
  std::uint64_t ins_seed = 0;
  auto* inspect = app.add_subcommand("inspect", "write a six-panel diagnostic strip");
  inspect->add_option("image", ins.image)->required();
  inspect->add_option("config", ins.config_path)->required();
  inspect->add_option("out_png", ins.out_png)->required();
  auto* ins_pool_opt = inspect->add_option("--pool", ins_pool);
  auto* ins_partner_opt = inspect->add_option("--partner", ins_partner);
  auto* ins_seed_opt = inspect->add_option("--seed", ins_seed);

  std::string fl_clean, fl_corrupt, fl_mode = "3d";
  std::vector<double> fl_thresholds = {0.1, 0.5, 1.0};
  auto* fluct = app.add_subcommand("fluct", "count phase fluctuations between image pairs");
  fluct->add_option("clean_dir", fl_clean)->required();
  fluct->add_option("corrupted_dir", fl_corrupt)->required();
  fluct->add_option("--thresholds", fl_thresholds)->delimiter(',')->capture_default_str();
  fluct->add_option("--dft-mode", fl_mode)->capture_default_str();

  std::string mce_net, mce_ref;
  auto* mce = app.add_subcommand("mce", "corruption error and mCE against a reference");
  mce->add_option("network_csv", mce_net)->required();
  mce->add_option("reference_csv", mce_ref)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(kConfigError);
  }

  if (augment->parsed()) {
    if (*aug_seed_opt) aug.seed = aug_seed;
    if (*aug_pool_opt) aug.pool = aug_pool;
    return cmd_augment(aug, std::cerr);
  }
  if (replay->parsed()) return cmd_replay(replay_manifest, replay_out, replay_workers, std::cerr);
  if (pool_build->parsed()) {
    return guarded(std::cerr, [&] {
      pb.shape = parse_shape(pb_shape);
      pb.mode = parse_mode_flag(pb_mode);
      return cmd_pool_build(pb, std::cerr);
    });
  }
  if (inspect->parsed()) {
    if (*ins_pool_opt) ins.pool = ins_pool;
    if (*ins_partner_opt) ins.partner = ins_partner;
    if (*ins_seed_opt) ins.seed = ins_seed;
    return cmd_inspect(ins, std::cerr);
  }
  if (fluct->parsed()) {
    return guarded(std::cerr, [&] {
      return cmd_fluct(fl_clean, fl_corrupt, fl_thresholds, parse_mode_flag(fl_mode), std::cout,
                       std::cerr);
    });
  }
  if (mce->parsed()) return cmd_mce(mce_net, mce_ref, std::cout, std::cerr);
  return static_cast<int>(kFailure);
}

}  // namespace vipaug::cli
