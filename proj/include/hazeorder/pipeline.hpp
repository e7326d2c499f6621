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

#ifndef HAZEORDER_PIPELINE_HPP_
#define HAZEORDER_PIPELINE_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hazeorder/config.hpp"
#include "hazeorder/image.hpp"

namespace hazeorder {

// Forward model ------------------------------------------------------------

struct SynthParams {
  double beta = 1.0;
  AtmosphericLight airlight;
  ScalarMap depth;  // nonnegative, same size as the clear image
};

// t = exp(-beta * d).
ScalarMap transmission_from_depth(const ScalarMap& depth, double beta);

// H = J * t + A * (1 - t).
PlanarImage synthesize_haze(const PlanarImage& clear, const SynthParams& p);

// Depth ordering ------------------------------------------------------------

// Euclidean distance between each pixel and the airlight.
ScalarMap color_difference(const PlanarImage& img, const AtmosphericLight& a);

// Local maximum of theta over an r x r patch. Smaller values mean farther.
ScalarMap extract_depth_order(const ScalarMap& theta, int r);

// Min-max normalization to [0,1]; a constant map becomes all zeros.
ScalarMap normalize(const ScalarMap& theta_r);

double apply_weight(double z, WeightFunction fn) noexcept;
ScalarMap weight(const ScalarMap& z, WeightFunction fn);

// Global optimization --------------------------------------------------------

inline constexpr double kBoundaryExclusion = 1e-9;

// Smallest transmission at which the recovered pixel first touches 0 or 1.
ScalarMap boundary_transmission(const PlanarImage& hazy,
                                const AtmosphericLight& a);

// theta_hat at which each pixel reaches the boundary. Pixels with
// t_b * phi(z) below kBoundaryExclusion never reach it and are set to +inf.
ScalarMap boundary_theta(const ScalarMap& theta_r, const ScalarMap& z,
                         const ScalarMap& t_b, WeightFunction fn);

// Epsilon quantile of the finite values, linear interpolation between
// closest ranks at position epsilon * (n - 1). Empty pool gives nullopt.
std::optional<double> sortp(std::span<const double> values, double epsilon);

// max(theta_eps, max(theta_r)).
double global_theta_hat(double theta_eps, const ScalarMap& theta_r);

// Transmission and recovery -------------------------------------------------

// theta_r * (1 - w) + theta_hat * w.
ScalarMap transform_theta(const ScalarMap& theta_r, const ScalarMap& w,
                          double theta_hat);

// theta_haze / theta_clear clamped to [t_floor, 1]; t_floor where the
// denominator vanishes.
ScalarMap transmission(const ScalarMap& theta_haze_r,
                       const ScalarMap& theta_clear_r, double t_floor);

// J = (H - A) / t + A, unclamped, planar.
std::vector<double> recover_unclamped(const PlanarImage& hazy,
                                      const ScalarMap& t,
                                      const AtmosphericLight& a);

PlanarImage recover(const PlanarImage& hazy, const ScalarMap& t,
                    const AtmosphericLight& a);

struct OverflowStats {
  std::size_t samples = 0;  // samples outside [0,1]
  std::size_t pixels = 0;   // pixels with at least one such sample
  double sample_fraction = 0.0;
  double pixel_fraction = 0.0;
};

OverflowStats count_overflow(std::span<const double> planar, int width,
                             int height, int channels);

// End-to-end ---------------------------------------------------------------

struct PipelineTrace {
  AtmosphericLight airlight;
  ScalarMap theta_haze;
  ScalarMap theta_r_haze;
  ScalarMap z;
  ScalarMap w;
  ScalarMap t_boundary;
  double theta_eps = 0.0;   // percentile result, or max(theta_r) fallback
  double theta_hat_clear = 0.0;
  ScalarMap theta_r_clear;
  ScalarMap t_raw;
  ScalarMap t_refined;
  OverflowStats overflow;   // of the recovered image before clamping
};

struct DehazeResult {
  PlanarImage image;
  PipelineTrace trace;
};

DehazeResult dehaze(const PlanarImage& hazy, const DehazeConfig& cfg);

}  // namespace hazeorder

#endif  // HAZEORDER_PIPELINE_HPP_
