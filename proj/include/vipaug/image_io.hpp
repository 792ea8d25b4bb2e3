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

// PNG/JPEG decoding and lossless PNG encoding through OpenCV's codecs.
// Images are RGB (or single-channel) with values in [0, 1].

#include <cmath>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "vipaug/grid.hpp"

namespace vipaug {

inline bool has_image_extension(const std::filesystem::path& p) {
  std::string ext = p.extension().string();
  for (char& ch : ext) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

inline ImageTensor from_mat(const cv::Mat& m8) {
  const std::size_t channels = static_cast<std::size_t>(m8.channels());
  ImageTensor img(Shape{static_cast<std::size_t>(m8.rows), static_cast<std::size_t>(m8.cols),
                        channels});
  for (int r = 0; r < m8.rows; ++r) {
    const auto* row = m8.ptr<unsigned char>(r);
    for (int c = 0; c < m8.cols; ++c) {
      for (std::size_t z = 0; z < channels; ++z) {
        img(static_cast<std::size_t>(r), static_cast<std::size_t>(c), z) =
            row[static_cast<std::size_t>(c) * channels + z] / 255.0;
      }
    }
  }
  return img;
}

// 8-bit quantization with rounding; values are clamped to [0, 1].
inline cv::Mat to_mat(const ImageTensor& img) {
  const int type = CV_8UC(static_cast<int>(img.channels()));
  cv::Mat m(static_cast<int>(img.height()), static_cast<int>(img.width()), type);
  for (std::size_t r = 0; r < img.height(); ++r) {
    auto* row = m.ptr<unsigned char>(static_cast<int>(r));
    for (std::size_t c = 0; c < img.width(); ++c) {
      for (std::size_t z = 0; z < img.channels(); ++z) {
        const double v = std::fmin(1.0, std::fmax(0.0, img(r, c, z)));
        row[c * img.channels() + z] = static_cast<unsigned char>(std::lround(v * 255.0));
      }
    }
  }
  return m;
}

// Decodes to `channels` (1 or 3) channels; nullopt when undecodable.
inline std::optional<ImageTensor> read_image(const std::filesystem::path& path,
                                             std::size_t channels = 3) {
  if (channels != 1 && channels != 3) return std::nullopt;
  const int flags = channels == 1 ? cv::IMREAD_GRAYSCALE : cv::IMREAD_COLOR;
  cv::Mat m;
  try {
    m = cv::imread(path.string(), flags);
  } catch (const cv::Exception&) {
    return std::nullopt;
  }
  if (m.empty()) return std::nullopt;
  if (channels == 3) cv::cvtColor(m, m, cv::COLOR_BGR2RGB);
  return from_mat(m);
}

// Writes an 8-bit PNG. Returns false on failure.
inline bool write_png(const std::filesystem::path& path, const ImageTensor& img) {
  cv::Mat m = to_mat(img);
  if (img.channels() == 3) cv::cvtColor(m, m, cv::COLOR_RGB2BGR);
  try {
    return cv::imwrite(path.string(), m, {cv::IMWRITE_PNG_COMPRESSION, 6});
  } catch (const cv::Exception&) {
    return false;
  }
}

}  // namespace vipaug
