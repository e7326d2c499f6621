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

#include "hazeorder/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hazeorder/airlight.hpp"
#include "hazeorder/error.hpp"
#include "hazeorder/pipeline.hpp"

namespace hazeorder {

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    // Positions i..j-1 hold ranks i+1..j.
    const double avg = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = avg;
    i = j;
  }
  return ranks;
}

double spearman_rho(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    fail(ErrorCode::kStructural, "spearman: sequences differ in length (" +
                                     std::to_string(xs.size()) + " vs " +
                                     std::to_string(ys.size()) + ")");
  }
  if (xs.size() < 2) fail(ErrorCode::kStructural, "spearman: need >= 2 samples");
  const std::vector<double> rx = average_ranks(xs);
  const std::vector<double> ry = average_ranks(ys);
  const double n = static_cast<double>(rx.size());
  // Both rank vectors have mean (n + 1) / 2.
  const double mean = 0.5 * (n + 1.0);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mean;
    const double dy = ry[i] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) {
    fail(ErrorCode::kValidation, "spearman: constant sequence has no rank variance");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> row_profile(const ScalarMap& theta_r) {
  std::vector<double> profile(theta_r.height());
  for (int y = 0; y < theta_r.height(); ++y) {
    auto row = theta_r.row(y);
    const double sum = std::accumulate(row.begin(), row.end(), 0.0);
    profile[theta_r.height() - 1 - y] = sum / static_cast<double>(row.size());
  }
  return profile;
}

std::vector<std::size_t> sample_indices(std::size_t n, const AnalysisOptions& opts) {
  std::size_t stride = 1;
  if (!opts.full_rank && opts.max_samples > 0 && n > opts.max_samples) {
    stride = (n + opts.max_samples - 1) / opts.max_samples;
  }
  std::vector<std::size_t> idx;
  idx.reserve(n / stride + 1);
  for (std::size_t i = 0; i < n; i += stride) idx.push_back(i);
  return idx;
}

namespace {

ScalarMap theta_r_of(const PlanarImage& img, const AtmosphericLight& a, int r) {
  return extract_depth_order(color_difference(img, a), r);
}

AtmosphericLight airlight_for(const PlanarImage& hazy, const AnalysisOptions& opts) {
  return opts.airlight ? *opts.airlight : estimate_airlight(hazy);
}

}  // namespace

DepthOrderReport depth_order_correlation(const PlanarImage& hazy,
                                         const ScalarMap& depth,
                                         const AnalysisOptions& opts) {
  if (hazy.width() != depth.width() || hazy.height() != depth.height()) {
    fail(ErrorCode::kStructural, "depth map and hazy image differ in size");
  }
  const ScalarMap theta_r = theta_r_of(hazy, airlight_for(hazy, opts), opts.r);
  const auto idx = sample_indices(theta_r.size(), opts);
  std::vector<double> xs, ys;
  xs.reserve(idx.size());
  ys.reserve(idx.size());
  for (std::size_t i : idx) {
    xs.push_back(-theta_r[i]);
    ys.push_back(depth[i]);
  }
  DepthOrderReport rep;
  rep.rho = spearman_rho(xs, ys);
  rep.row_profile = row_profile(theta_r);
  rep.patch_size = opts.r;
  rep.n_pixels = idx.size();
  return rep;
}

DepthOrderReport depth_order_correlation(const PlanarImage& hazy,
                                         const PlanarImage& clear,
                                         const AnalysisOptions& opts) {
  if (!hazy.same_shape(clear)) {
    fail(ErrorCode::kStructural, "clear and hazy images differ in shape");
  }
  const AtmosphericLight a = airlight_for(hazy, opts);
  const ScalarMap haze_r = theta_r_of(hazy, a, opts.r);
  const ScalarMap clear_r = theta_r_of(clear, a, opts.r);
  const auto idx = sample_indices(haze_r.size(), opts);
  std::vector<double> xs, ys;
  xs.reserve(idx.size());
  ys.reserve(idx.size());
  for (std::size_t i : idx) {
    xs.push_back(haze_r[i]);
    ys.push_back(clear_r[i]);
  }
  DepthOrderReport rep;
  rep.rho = spearman_rho(xs, ys);
  rep.row_profile = row_profile(haze_r);
  rep.patch_size = opts.r;
  rep.n_pixels = idx.size();
  return rep;
}

DepthOrderReport depth_order_profile(const PlanarImage& hazy,
                                     const AnalysisOptions& opts) {
  const ScalarMap theta_r = theta_r_of(hazy, airlight_for(hazy, opts), opts.r);
  DepthOrderReport rep;
  rep.row_profile = row_profile(theta_r);
  rep.patch_size = opts.r;
  rep.n_pixels = theta_r.size();
  return rep;
}

}  // namespace hazeorder
