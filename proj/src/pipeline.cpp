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

#include "hazeorder/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hazeorder/airlight.hpp"
#include "hazeorder/error.hpp"
#include "hazeorder/filters.hpp"

namespace hazeorder {
namespace {

void check_airlight_channels(const PlanarImage& img, const AtmosphericLight& a) {
  if (a.size() != static_cast<std::size_t>(img.channels())) {
    fail(ErrorCode::kStructural,
         "airlight has " + std::to_string(a.size()) + " components but image has " +
             std::to_string(img.channels()) + " channels");
  }
}

void check_shape(const ScalarMap& a, const ScalarMap& b, const char* what) {
  if (!a.same_shape(b)) {
    fail(ErrorCode::kStructural, std::string(what) + ": map dimensions differ");
  }
}

void check_shape(const PlanarImage& img, const ScalarMap& m, const char* what) {
  if (img.width() != m.width() || img.height() != m.height()) {
    fail(ErrorCode::kStructural,
         std::string(what) + ": map and image dimensions differ");
  }
}

}  // namespace

// Forward model ------------------------------------------------------------

ScalarMap transmission_from_depth(const ScalarMap& depth, double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    fail(ErrorCode::kValidation, "scattering coefficient beta must be > 0");
  }
  ScalarMap t(depth.width(), depth.height());
  for (std::size_t i = 0; i < depth.size(); ++i) {
    const double d = depth[i];
    if (!(d >= 0.0)) {
      fail(ErrorCode::kValidation, "depth must be nonnegative");
    }
    t[i] = std::exp(-beta * d);
  }
  return t;
}

PlanarImage synthesize_haze(const PlanarImage& clear, const SynthParams& p) {
  check_shape(clear, p.depth, "synthesize_haze");
  check_airlight_channels(clear, p.airlight);
  const ScalarMap t = transmission_from_depth(p.depth, p.beta);
  const std::size_t n = clear.pixel_count();
  std::vector<double> out(clear.samples().size());
  for (int c = 0; c < clear.channels(); ++c) {
    auto j = clear.plane(c);
    const double a = p.airlight[c];
    for (std::size_t i = 0; i < n; ++i) {
      out[c * n + i] = j[i] * t[i] + a * (1.0 - t[i]);
    }
  }
  return PlanarImage::clamped(clear.width(), clear.height(), clear.channels(),
                              std::move(out));
}

// Depth ordering ------------------------------------------------------------

ScalarMap color_difference(const PlanarImage& img, const AtmosphericLight& a) {
  check_airlight_channels(img, a);
  const std::size_t n = img.pixel_count();
  ScalarMap theta(img.width(), img.height());
  for (int c = 0; c < img.channels(); ++c) {
    auto plane = img.plane(c);
    const double ac = a[c];
    for (std::size_t i = 0; i < n; ++i) {
      const double d = plane[i] - ac;
      theta[i] += d * d;
    }
  }
  for (double& v : theta.data()) v = std::sqrt(v);
  return theta;
}

ScalarMap extract_depth_order(const ScalarMap& theta, int r) {
  if (r < 3 || r % 2 == 0) {
    fail(ErrorCode::kConfig,
         "patch size must be odd and >= 3, got " + std::to_string(r));
  }
  return max_filter(theta, r);
}

ScalarMap normalize(const ScalarMap& theta_r) {
  const double lo = theta_r.min();
  const double hi = theta_r.max();
  ScalarMap z(theta_r.width(), theta_r.height(), 0.0);
  if (hi - lo < 1e-12) return z;
  const double inv = 1.0 / (hi - lo);
  for (std::size_t i = 0; i < z.size(); ++i) {
    z[i] = std::clamp((theta_r[i] - lo) * inv, 0.0, 1.0);
  }
  return z;
}

double apply_weight(double z, WeightFunction fn) noexcept {
  switch (fn) {
    case WeightFunction::kPhi1: return z * (2.0 - z);
    case WeightFunction::kPhi2: return z;
    case WeightFunction::kPhi3: return z * z;
  }
  return z;
}

ScalarMap weight(const ScalarMap& z, WeightFunction fn) {
  if (fn != WeightFunction::kPhi1 && fn != WeightFunction::kPhi2 &&
      fn != WeightFunction::kPhi3) {
    fail(ErrorCode::kConfig, "unknown weight function");
  }
  ScalarMap w(z.width(), z.height());
  for (std::size_t i = 0; i < z.size(); ++i) {
    w[i] = std::clamp(apply_weight(z[i], fn), 0.0, 1.0);
  }
  return w;
}

// Global optimization --------------------------------------------------------

ScalarMap boundary_transmission(const PlanarImage& hazy,
                                const AtmosphericLight& a) {
  check_airlight_channels(hazy, a);
  const AtmosphericLight safe = a.below_one();
  const std::size_t n = hazy.pixel_count();
  ScalarMap tb(hazy.width(), hazy.height(), 0.0);
  for (int c = 0; c < hazy.channels(); ++c) {
    auto plane = hazy.plane(c);
    const double ac = safe[c];
    for (std::size_t i = 0; i < n; ++i) {
      const double diff = plane[i] - ac;
      const double to_black = diff / (0.0 - ac);
      const double to_white = diff / (1.0 - ac);
      tb[i] = std::max(tb[i], std::max(to_black, to_white));
    }
  }
  for (double& v : tb.data()) v = std::clamp(v, 0.0, 1.0);
  return tb;
}

ScalarMap boundary_theta(const ScalarMap& theta_r, const ScalarMap& z,
                         const ScalarMap& t_b, WeightFunction fn) {
  check_shape(theta_r, z, "boundary_theta");
  check_shape(theta_r, t_b, "boundary_theta");
  ScalarMap out(theta_r.width(), theta_r.height());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double tp = t_b[i] * apply_weight(z[i], fn);
    if (tp < kBoundaryExclusion) {
      out[i] = std::numeric_limits<double>::infinity();
    } else {
      out[i] = theta_r[i] / tp * (1.0 - t_b[i] + tp);
    }
  }
  return out;
}

std::optional<double> sortp(std::span<const double> values, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    fail(ErrorCode::kConfig, "percentile fraction must lie in [0,1]");
  }
  std::vector<double> pool;
  pool.reserve(values.size());
  for (double v : values) {
    if (std::isfinite(v)) pool.push_back(v);
  }
  if (pool.empty()) return std::nullopt;

  const double pos = epsilon * static_cast<double>(pool.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, pool.size() - 1);
  std::nth_element(pool.begin(), pool.begin() + lo, pool.end());
  const double v_lo = pool[lo];
  if (hi == lo) return v_lo;
  // The element after lo in sorted order is the minimum of the upper part.
  const double v_hi = *std::min_element(pool.begin() + lo + 1, pool.end());
  return v_lo + (pos - static_cast<double>(lo)) * (v_hi - v_lo);
}

double global_theta_hat(double theta_eps, const ScalarMap& theta_r) {
  return std::max(theta_eps, theta_r.max());
}

// Transmission and recovery -------------------------------------------------

ScalarMap transform_theta(const ScalarMap& theta_r, const ScalarMap& w,
                          double theta_hat) {
  check_shape(theta_r, w, "transform_theta");
  ScalarMap out(theta_r.width(), theta_r.height());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = theta_r[i] + w[i] * (theta_hat - theta_r[i]);
  }
  return out;
}

ScalarMap transmission(const ScalarMap& theta_haze_r,
                       const ScalarMap& theta_clear_r, double t_floor) {
  check_shape(theta_haze_r, theta_clear_r, "transmission");
  ScalarMap t(theta_haze_r.width(), theta_haze_r.height());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double denom = theta_clear_r[i];
    const double v = denom >= 1e-9 ? theta_haze_r[i] / denom : t_floor;
    t[i] = std::clamp(v, t_floor, 1.0);
  }
  return t;
}

std::vector<double> recover_unclamped(const PlanarImage& hazy,
                                      const ScalarMap& t,
                                      const AtmosphericLight& a) {
  check_shape(hazy, t, "recover");
  check_airlight_channels(hazy, a);
  const std::size_t n = hazy.pixel_count();
  std::vector<double> out(hazy.samples().size());
  for (int c = 0; c < hazy.channels(); ++c) {
    auto plane = hazy.plane(c);
    const double ac = a[c];
    for (std::size_t i = 0; i < n; ++i) {
      out[c * n + i] = (plane[i] - ac) / t[i] + ac;
    }
  }
  return out;
}

PlanarImage recover(const PlanarImage& hazy, const ScalarMap& t,
                    const AtmosphericLight& a) {
  return PlanarImage::clamped(hazy.width(), hazy.height(), hazy.channels(),
                              recover_unclamped(hazy, t, a));
}

OverflowStats count_overflow(std::span<const double> planar, int width,
                             int height, int channels) {
  const std::size_t n = static_cast<std::size_t>(width) * height;
  if (planar.size() != n * channels) {
    fail(ErrorCode::kStructural, "overflow count: sample length mismatch");
  }
  OverflowStats s;
  for (std::size_t i = 0; i < n; ++i) {
    bool any = false;
    for (int c = 0; c < channels; ++c) {
      const double v = planar[c * n + i];
      if (v < 0.0 || v > 1.0) {
        ++s.samples;
        any = true;
      }
    }
    if (any) ++s.pixels;
  }
  s.sample_fraction = static_cast<double>(s.samples) / static_cast<double>(n * channels);
  s.pixel_fraction = static_cast<double>(s.pixels) / static_cast<double>(n);
  return s;
}

// End-to-end ---------------------------------------------------------------

DehazeResult dehaze(const PlanarImage& hazy, const DehazeConfig& cfg) {
  cfg.validate();
  if (hazy.empty()) fail(ErrorCode::kStructural, "empty input image");
  if (hazy.width() < cfg.r || hazy.height() < cfg.r) {
    fail(ErrorCode::kConfig, "image " + std::to_string(hazy.width()) + "x" +
                                 std::to_string(hazy.height()) +
                                 " is smaller than the patch size " +
                                 std::to_string(cfg.r));
  }

  DehazeResult result;
  PipelineTrace& tr = result.trace;

  const AtmosphericLight a =
      (cfg.airlight ? *cfg.airlight : estimate_airlight(hazy)).below_one();
  check_airlight_channels(hazy, a);
  tr.airlight = a;

  tr.theta_haze = color_difference(hazy, a);
  tr.theta_r_haze = extract_depth_order(tr.theta_haze, cfg.r);
  tr.z = normalize(tr.theta_r_haze);
  tr.w = weight(tr.z, cfg.weight_fn);

  const double theta_r_max = tr.theta_r_haze.max();
  if (cfg.theta_hat_scale) {
    tr.theta_eps = *cfg.theta_hat_scale * theta_r_max;
  } else {
    tr.t_boundary = boundary_transmission(hazy, a);
    const ScalarMap theta_b =
        boundary_theta(tr.theta_r_haze, tr.z, tr.t_boundary, cfg.weight_fn);
    tr.theta_eps = sortp(theta_b.data(), cfg.epsilon).value_or(theta_r_max);
  }
  tr.theta_hat_clear = global_theta_hat(tr.theta_eps, tr.theta_r_haze);

  tr.theta_r_clear = transform_theta(tr.theta_r_haze, tr.w, tr.theta_hat_clear);
  tr.t_raw = transmission(tr.theta_r_haze, tr.theta_r_clear, cfg.t_floor);

  tr.t_refined = guided_filter(tr.t_raw, luma(hazy), cfg.guided_radius,
                               cfg.guided_eps);
  for (double& v : tr.t_refined.data()) v = std::clamp(v, cfg.t_floor, 1.0);

  std::vector<double> raw = recover_unclamped(hazy, tr.t_refined, a);
  tr.overflow = count_overflow(raw, hazy.width(), hazy.height(), hazy.channels());
  result.image = PlanarImage::clamped(hazy.width(), hazy.height(),
                                      hazy.channels(), std::move(raw));
  if (cfg.apply_clahe) result.image = clahe(result.image, cfg.clahe);
  return result;
}

}  // namespace hazeorder
