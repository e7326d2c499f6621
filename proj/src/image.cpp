// Copyright 2026 The hazeorder Authors. All Rights Reserved.
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

#include "hazeorder/image.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hazeorder/config.hpp"
#include "hazeorder/error.hpp"

namespace hazeorder {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kStructural: return "structural";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kValidation: return "validation";
    case ErrorCode::kUnsupported: return "unsupported";
  }
  return "unknown";
}

namespace {

void check_dimensions(int width, int height) {
  if (width < 1 || height < 1) {
    fail(ErrorCode::kConfig, "image dimensions must be positive, got " +
                                 std::to_string(width) + "x" +
                                 std::to_string(height));
  }
}

void check_channels(int channels) {
  if (channels != 1 && channels != 3) {
    fail(ErrorCode::kUnsupported,
         "only 1 or 3 channels are supported, got " + std::to_string(channels));
  }
}

}  // namespace

// ScalarMap ------------------------------------------------------------------

ScalarMap::ScalarMap(int width, int height, double fill)
    : width_(width), height_(height) {
  check_dimensions(width, height);
  data_.assign(static_cast<std::size_t>(width) * height, fill);
}

ScalarMap::ScalarMap(int width, int height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
  check_dimensions(width, height);
  if (data_.size() != static_cast<std::size_t>(width) * height) {
    fail(ErrorCode::kStructural,
         "map data length " + std::to_string(data_.size()) +
             " does not match " + std::to_string(width) + "x" +
             std::to_string(height));
  }
}

bool ScalarMap::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

double ScalarMap::min() const {
  if (data_.empty()) fail(ErrorCode::kStructural, "min of empty map");
  return *std::min_element(data_.begin(), data_.end());
}

double ScalarMap::max() const {
  if (data_.empty()) fail(ErrorCode::kStructural, "max of empty map");
  return *std::max_element(data_.begin(), data_.end());
}

double ScalarMap::mean() const {
  if (data_.empty()) fail(ErrorCode::kStructural, "mean of empty map");
  return std::accumulate(data_.begin(), data_.end(), 0.0) /
         static_cast<double>(data_.size());
}

// PlanarImage ----------------------------------------------------------------

PlanarImage PlanarImage::from_samples(int width, int height, int channels,
                                      std::vector<double> samples) {
  check_dimensions(width, height);
  check_channels(channels);
  const std::size_t expected =
      static_cast<std::size_t>(width) * height * channels;
  if (samples.size() != expected) {
    fail(ErrorCode::kStructural, "sample count " +
                                     std::to_string(samples.size()) +
                                     " != " + std::to_string(expected));
  }
  for (double s : samples) {
    if (!(s >= 0.0 && s <= 1.0)) {
      fail(ErrorCode::kValidation,
           "image sample " + std::to_string(s) + " outside [0,1]");
    }
  }
  return PlanarImage(width, height, channels, std::move(samples));
}

PlanarImage PlanarImage::clamped(int width, int height, int channels,
                                 std::vector<double> samples) {
  for (double& s : samples) {
    s = std::isnan(s) ? 0.0 : std::clamp(s, 0.0, 1.0);
  }
  return from_samples(width, height, channels, std::move(samples));
}

PlanarImage PlanarImage::from_planes(const std::vector<ScalarMap>& planes) {
  if (planes.empty()) fail(ErrorCode::kStructural, "no planes");
  const int w = planes.front().width();
  const int h = planes.front().height();
  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(w) * h * planes.size());
  for (const ScalarMap& p : planes) {
    if (p.width() != w || p.height() != h) {
      fail(ErrorCode::kStructural, "plane dimensions differ");
    }
    samples.insert(samples.end(), p.data().begin(), p.data().end());
  }
  return from_samples(w, h, static_cast<int>(planes.size()),
                      std::move(samples));
}

ScalarMap PlanarImage::channel(int c) const {
  auto p = plane(c);
  return ScalarMap(width_, height_, std::vector<double>(p.begin(), p.end()));
}

// AtmosphericLight -----------------------------------------------------------

AtmosphericLight::AtmosphericLight(std::vector<double> components)
    : a_(std::move(components)) {
  if (a_.size() != 1 && a_.size() != 3) {
    fail(ErrorCode::kStructural, "airlight needs 1 or 3 components, got " +
                                     std::to_string(a_.size()));
  }
  for (double v : a_) {
    if (!(v > 0.0 && v <= 1.0)) {
      fail(ErrorCode::kValidation,
           "airlight component " + std::to_string(v) + " outside (0,1]");
    }
  }
}

AtmosphericLight AtmosphericLight::below_one() const {
  std::vector<double> c = a_;
  for (double& v : c) v = std::min(v, 1.0 - kUpperMargin);
  return AtmosphericLight(std::move(c));
}

// Byte conversion ------------------------------------------------------------

PlanarImage from_bytes(std::span<const std::uint8_t> raw, int width, int height,
                       int channels) {
  check_dimensions(width, height);
  check_channels(channels);
  const std::size_t n = static_cast<std::size_t>(width) * height;
  if (raw.size() != n * channels) {
    fail(ErrorCode::kStructural,
         "byte buffer length " + std::to_string(raw.size()) + " != " +
             std::to_string(n * channels));
  }
  std::vector<double> samples(n * channels);
  for (std::size_t i = 0; i < n; ++i) {
    for (int c = 0; c < channels; ++c) {
      samples[c * n + i] = raw[i * channels + c] / 255.0;
    }
  }
  return PlanarImage::from_samples(width, height, channels, std::move(samples));
}

std::uint8_t quantize(double v) noexcept {
  const double scaled = std::floor(v * 255.0 + 0.5);
  return static_cast<std::uint8_t>(std::clamp(scaled, 0.0, 255.0));
}

std::vector<std::uint8_t> to_bytes(const PlanarImage& img) {
  const std::size_t n = img.pixel_count();
  const int channels = img.channels();
  std::vector<std::uint8_t> raw(n * channels);
  auto s = img.samples();
  for (std::size_t i = 0; i < n; ++i) {
    for (int c = 0; c < channels; ++c) {
      raw[i * channels + c] = quantize(s[c * n + i]);
    }
  }
  return raw;
}

ScalarMap luma(const PlanarImage& img) {
  if (img.channels() == 1) return img.channel(0);
  ScalarMap y(img.width(), img.height());
  auto r = img.plane(0);
  auto g = img.plane(1);
  auto b = img.plane(2);
  for (std::size_t i = 0; i < y.size(); ++i) {
    y[i] = 0.299 * r[i] + 0.587 * g[i] + 0.114 * b[i];
  }
  return y;
}

// DehazeConfig ---------------------------------------------------------------

WeightFunction parse_weight_function(std::string_view name) {
  if (name == "phi1") return WeightFunction::kPhi1;
  if (name == "phi2") return WeightFunction::kPhi2;
  if (name == "phi3") return WeightFunction::kPhi3;
  fail(ErrorCode::kConfig, "unknown weight function '" + std::string(name) +
                               "' (expected phi1, phi2 or phi3)");
}

const char* weight_function_name(WeightFunction fn) {
  switch (fn) {
    case WeightFunction::kPhi1: return "phi1";
    case WeightFunction::kPhi2: return "phi2";
    case WeightFunction::kPhi3: return "phi3";
  }
  return "unknown";
}

void DehazeConfig::validate() const {
  if (r < 3 || r % 2 == 0) {
    fail(ErrorCode::kConfig, "patch size r must be odd and >= 3, got " +
                                 std::to_string(r));
  }
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    fail(ErrorCode::kConfig, "epsilon must lie in [0,1]");
  }
  if (guided_radius < 1 || guided_radius % 2 == 0) {
    fail(ErrorCode::kConfig, "guided filter window must be odd and >= 1");
  }
  if (!(guided_eps > 0.0)) {
    fail(ErrorCode::kConfig, "guided filter eps must be positive");
  }
  if (!(t_floor > 0.0 && t_floor < 1.0)) {
    fail(ErrorCode::kConfig, "t_floor must lie in (0,1)");
  }
  if (clahe.tiles_x < 1 || clahe.tiles_y < 1) {
    fail(ErrorCode::kConfig, "CLAHE tile grid must be at least 1x1");
  }
  if (!(clahe.clip > 0.0)) {
    fail(ErrorCode::kConfig, "CLAHE clip factor must be positive");
  }
  if (theta_hat_scale && !(*theta_hat_scale >= 1.0 &&
                           std::isfinite(*theta_hat_scale))) {
    fail(ErrorCode::kConfig, "theta-hat scale must be >= 1");
  }
}

}  // namespace hazeorder
