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

#ifndef HAZEORDER_METRICS_HPP_
#define HAZEORDER_METRICS_HPP_

#include <optional>

#include "hazeorder/image.hpp"

namespace hazeorder {

inline constexpr double kPsnrCap = 99.0;

// 10 log10(1 / MSE) over every sample; identical inputs give kPsnrCap.
double psnr(const PlanarImage& a, const PlanarImage& b);

// Single-scale SSIM on luma: 11x11 Gaussian window (sigma 1.5),
// K1 = 0.01, K2 = 0.03, dynamic range 1, averaged over the valid region.
double ssim(const PlanarImage& a, const PlanarImage& b);

struct Lab {
  double l;
  double a;
  double b;
};

// sRGB in [0,1] to CIELAB, D65 white, 2 degree observer.
Lab srgb_to_lab(double r, double g, double b) noexcept;

// CIEDE2000 with kL = kC = kH = 1.
double delta_e2000(const Lab& x, const Lab& y) noexcept;

// Mean per-pixel CIEDE2000. Needs three channels (kUnsupported otherwise).
double ciede2000(const PlanarImage& a, const PlanarImage& b);

struct MetricReport {
  double psnr = 0.0;
  double ssim = 0.0;
  std::optional<double> ciede2000;  // absent for grayscale
};

MetricReport evaluate(const PlanarImage& restored, const PlanarImage& truth);

}  // namespace hazeorder

#endif  // HAZEORDER_METRICS_HPP_
