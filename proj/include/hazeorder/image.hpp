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

#ifndef HAZEORDER_IMAGE_HPP_
#define HAZEORDER_IMAGE_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace hazeorder {

// Single-channel H x W map of doubles, row-major. Producers keep samples
// finite; the one documented exception is the boundary-theta map, where +inf
// marks pixels that can never reach the range boundary.
class ScalarMap {
 public:
  ScalarMap() = default;
  ScalarMap(int width, int height, double fill = 0.0);
  ScalarMap(int width, int height, std::vector<double> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double operator()(int x, int y) const noexcept {
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }
  double& operator()(int x, int y) noexcept {
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }
  double operator[](std::size_t i) const noexcept { return data_[i]; }
  double& operator[](std::size_t i) noexcept { return data_[i]; }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }
  std::span<const double> row(int y) const noexcept {
    return {data_.data() + static_cast<std::size_t>(y) * width_,
            static_cast<std::size_t>(width_)};
  }
  std::span<double> row(int y) noexcept {
    return {data_.data() + static_cast<std::size_t>(y) * width_,
            static_cast<std::size_t>(width_)};
  }

  bool same_shape(const ScalarMap& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }
  bool all_finite() const noexcept;
  double min() const;
  double max() const;
  double mean() const;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
};

// H x W x C image with samples in [0,1], stored planar (all of channel 0,
// then channel 1, ...). Immutable once built; every factory enforces the
// range and length invariants.
class PlanarImage {
 public:
  PlanarImage() = default;

  // Throws kValidation if any sample is outside [0,1] or not finite,
  // kStructural on a length mismatch, kConfig on bad dimensions.
  static PlanarImage from_samples(int width, int height, int channels,
                                  std::vector<double> samples);
  // Clamps into [0,1]; NaN becomes 0.
  static PlanarImage clamped(int width, int height, int channels,
                             std::vector<double> samples);
  static PlanarImage from_planes(const std::vector<ScalarMap>& planes);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * height_;
  }
  bool empty() const noexcept { return samples_.empty(); }

  std::span<const double> samples() const noexcept { return samples_; }
  std::span<const double> plane(int c) const noexcept {
    return {samples_.data() + c * pixel_count(), pixel_count()};
  }
  double at(int c, int x, int y) const noexcept {
    return samples_[c * pixel_count() + static_cast<std::size_t>(y) * width_ + x];
  }
  ScalarMap channel(int c) const;

  bool same_shape(const PlanarImage& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_ &&
           channels_ == other.channels_;
  }

 private:
  PlanarImage(int width, int height, int channels, std::vector<double> samples)
      : width_(width), height_(height), channels_(channels),
        samples_(std::move(samples)) {}

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<double> samples_;
};

// Per-channel global airlight. Components are in (0,1].
class AtmosphericLight {
 public:
  static constexpr double kUpperMargin = 1e-4;

  AtmosphericLight() = default;
  explicit AtmosphericLight(std::vector<double> components);

  std::size_t size() const noexcept { return a_.size(); }
  double operator[](std::size_t c) const noexcept { return a_[c]; }
  std::span<const double> components() const noexcept { return a_; }

  // Copy with every component pulled down to at most 1 - kUpperMargin, so
  // the (1 - A) denominators stay nonzero.
  AtmosphericLight below_one() const;

 private:
  std::vector<double> a_;
};

// Interleaved 8-bit samples (v/255) into planar doubles.
PlanarImage from_bytes(std::span<const std::uint8_t> raw, int width, int height,
                       int channels);
// round(v * 255) with ties rounded up, back to interleaved order.
std::vector<std::uint8_t> to_bytes(const PlanarImage& img);
std::uint8_t quantize(double v) noexcept;

// BT.601 luma. For a single channel image it returns that channel.
ScalarMap luma(const PlanarImage& img);

}  // namespace hazeorder

#endif  // HAZEORDER_IMAGE_HPP_
