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

#ifndef HAZEORDER_ANALYSIS_HPP_
#define HAZEORDER_ANALYSIS_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hazeorder/image.hpp"

namespace hazeorder {

// 1-based ranks; tied values share the mean of the ranks they span.
std::vector<double> average_ranks(std::span<const double> values);

// Spearman rank correlation: Pearson correlation of the average ranks.
// Throws kStructural on length mismatch or fewer than two samples and
// kValidation when either side has no rank variance.
double spearman_rho(std::span<const double> xs, std::span<const double> ys);

// Mean of every row, bottom row first.
std::vector<double> row_profile(const ScalarMap& theta_r);

struct AnalysisOptions {
  int r = 35;
  // When false, maps are subsampled by a uniform stride to at most
  // max_samples pixels before ranking.
  bool full_rank = false;
  std::size_t max_samples = 100000;
  // Used instead of the estimated airlight when set.
  std::optional<AtmosphericLight> airlight;
};

struct DepthOrderReport {
  double rho = 0.0;
  std::vector<double> row_profile;  // of theta_r^haze, bottom first
  int patch_size = 0;
  std::size_t n_pixels = 0;         // samples entering the correlation
};

// Indices visited by the ranking subsample.
std::vector<std::size_t> sample_indices(std::size_t n, const AnalysisOptions& opts);

// Against ground-truth depth: rho(rank(-theta_r), rank(d)).
DepthOrderReport depth_order_correlation(const PlanarImage& hazy,
                                         const ScalarMap& depth,
                                         const AnalysisOptions& opts = {});

// Against the clear image: rho(rank(theta_r^haze), rank(theta_r^clear)),
// both measured against the airlight of the hazy image.
DepthOrderReport depth_order_correlation(const PlanarImage& hazy,
                                         const PlanarImage& clear,
                                         const AnalysisOptions& opts = {});

// Row profile only; rho is left at zero and n_pixels counts the map.
DepthOrderReport depth_order_profile(const PlanarImage& hazy,
                                     const AnalysisOptions& opts = {});

}  // namespace hazeorder

#endif  // HAZEORDER_ANALYSIS_HPP_
