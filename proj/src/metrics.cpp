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

#include "hazeorder/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "hazeorder/error.hpp"

namespace hazeorder {
namespace {

void check_same(const PlanarImage& a, const PlanarImage& b, const char* what) {
  if (!a.same_shape(b)) {
    fail(ErrorCode::kStructural, std::string(what) + ": images differ in shape");
  }
}

constexpr int kSsimWindow = 11;
constexpr double kSsimSigma = 1.5;
constexpr double kC1 = 0.01 * 0.01;
constexpr double kC2 = 0.03 * 0.03;

std::array<double, kSsimWindow> gaussian_kernel() {
  std::array<double, kSsimWindow> k{};
  double sum = 0.0;
  for (int i = 0; i < kSsimWindow; ++i) {
    const double x = i - kSsimWindow / 2;
    k[i] = std::exp(-(x * x) / (2.0 * kSsimSigma * kSsimSigma));
    sum += k[i];
  }
  for (double& v : k) v /= sum;
  return k;
}

// Separable Gaussian filter, valid region only.
std::vector<double> filter_valid(const std::vector<double>& src, int w, int h,
                                 const std::array<double, kSsimWindow>& k) {
  const int ow = w - kSsimWindow + 1;
  const int oh = h - kSsimWindow + 1;
  std::vector<double> tmp(static_cast<std::size_t>(ow) * h);
  for (int y = 0; y < h; ++y) {
    const double* row = &src[static_cast<std::size_t>(y) * w];
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int i = 0; i < kSsimWindow; ++i) acc += k[i] * row[x + i];
      tmp[static_cast<std::size_t>(y) * ow + x] = acc;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(ow) * oh, 0.0);
  for (int y = 0; y < oh; ++y) {
    double* dst = &out[static_cast<std::size_t>(y) * ow];
    for (int i = 0; i < kSsimWindow; ++i) {
      const double* row = &tmp[static_cast<std::size_t>(y + i) * ow];
      for (int x = 0; x < ow; ++x) dst[x] += k[i] * row[x];
    }
  }
  return out;
}

double deg2rad(double d) { return d * std::numbers::pi / 180.0; }
double rad2deg(double r) { return r * 180.0 / std::numbers::pi; }

double srgb_decode(double v) {
  return v <= 0.04045 ? v / 12.92 : std::pow((v + 0.055) / 1.055, 2.4);
}

double lab_f(double t) {
  constexpr double delta = 6.0 / 29.0;
  return t > delta * delta * delta ? std::cbrt(t)
                                   : t / (3.0 * delta * delta) + 4.0 / 29.0;
}

}  // namespace

double psnr(const PlanarImage& a, const PlanarImage& b) {
  check_same(a, b, "psnr");
  auto sa = a.samples();
  auto sb = b.samples();
  double sse = 0.0;
  for (std::size_t i = 0; i < sa.size(); ++i) {
    const double d = sa[i] - sb[i];
    sse += d * d;
  }
  const double mse = sse / static_cast<double>(sa.size());
  if (mse <= 0.0) return kPsnrCap;
  return std::min(kPsnrCap, 10.0 * std::log10(1.0 / mse));
}

double ssim(const PlanarImage& a, const PlanarImage& b) {
  check_same(a, b, "ssim");
  const int w = a.width();
  const int h = a.height();
  if (w < kSsimWindow || h < kSsimWindow) {
    fail(ErrorCode::kStructural, "ssim needs at least 11x11 pixels");
  }
  const ScalarMap ya = luma(a);
  const ScalarMap yb = luma(b);
  const std::size_t n = ya.size();
  std::vector<double> x(ya.data().begin(), ya.data().end());
  std::vector<double> y(yb.data().begin(), yb.data().end());
  std::vector<double> xx(n), yy(n), xy(n);
  for (std::size_t i = 0; i < n; ++i) {
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }
  const auto k = gaussian_kernel();
  const auto mx = filter_valid(x, w, h, k);
  const auto my = filter_valid(y, w, h, k);
  const auto exx = filter_valid(xx, w, h, k);
  const auto eyy = filter_valid(yy, w, h, k);
  const auto exy = filter_valid(xy, w, h, k);
  double total = 0.0;
  for (std::size_t i = 0; i < mx.size(); ++i) {
    const double sx = exx[i] - mx[i] * mx[i];
    const double sy = eyy[i] - my[i] * my[i];
    const double sxy = exy[i] - mx[i] * my[i];
    const double num = (2.0 * mx[i] * my[i] + kC1) * (2.0 * sxy + kC2);
    const double den = (mx[i] * mx[i] + my[i] * my[i] + kC1) * (sx + sy + kC2);
    total += num / den;
  }
  return total / static_cast<double>(mx.size());
}

Lab srgb_to_lab(double r, double g, double b) noexcept {
  const double rl = srgb_decode(r);
  const double gl = srgb_decode(g);
  const double bl = srgb_decode(b);
  const double x = 0.4124564 * rl + 0.3575761 * gl + 0.1804375 * bl;
  const double y = 0.2126729 * rl + 0.7151522 * gl + 0.0721750 * bl;
  const double z = 0.0193339 * rl + 0.1191920 * gl + 0.9503041 * bl;
  const double fx = lab_f(x / 0.95047);
  const double fy = lab_f(y / 1.0);
  const double fz = lab_f(z / 1.08883);
  return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

double delta_e2000(const Lab& p, const Lab& q) noexcept {
  const double pow25_7 = 6103515625.0;  // 25^7
  const double c1 = std::hypot(p.a, p.b);
  const double c2 = std::hypot(q.a, q.b);
  const double c_bar7 = std::pow(0.5 * (c1 + c2), 7.0);
  const double g = 0.5 * (1.0 - std::sqrt(c_bar7 / (c_bar7 + pow25_7)));

  const double a1 = (1.0 + g) * p.a;
  const double a2 = (1.0 + g) * q.a;
  const double cp1 = std::hypot(a1, p.b);
  const double cp2 = std::hypot(a2, q.b);
  auto hue = [](double b, double a) {
    if (a == 0.0 && b == 0.0) return 0.0;
    double h = rad2deg(std::atan2(b, a));
    return h < 0.0 ? h + 360.0 : h;
  };
  const double h1 = hue(p.b, a1);
  const double h2 = hue(q.b, a2);

  const double dl = q.l - p.l;
  const double dc = cp2 - cp1;
  const double cprod = cp1 * cp2;
  double dh = 0.0;
  if (cprod != 0.0) {
    dh = h2 - h1;
    if (dh > 180.0) dh -= 360.0;
    else if (dh < -180.0) dh += 360.0;
  }
  const double d_big_h = 2.0 * std::sqrt(cprod) * std::sin(deg2rad(dh / 2.0));

  const double l_bar = 0.5 * (p.l + q.l);
  const double c_bar = 0.5 * (cp1 + cp2);
  double h_bar = h1 + h2;
  if (cprod != 0.0) {
    if (std::abs(h1 - h2) <= 180.0) h_bar = 0.5 * (h1 + h2);
    else if (h1 + h2 < 360.0) h_bar = 0.5 * (h1 + h2 + 360.0);
    else h_bar = 0.5 * (h1 + h2 - 360.0);
  }

  const double t = 1.0 - 0.17 * std::cos(deg2rad(h_bar - 30.0)) +
                   0.24 * std::cos(deg2rad(2.0 * h_bar)) +
                   0.32 * std::cos(deg2rad(3.0 * h_bar + 6.0)) -
                   0.20 * std::cos(deg2rad(4.0 * h_bar - 63.0));
  const double d_theta = 30.0 * std::exp(-std::pow((h_bar - 275.0) / 25.0, 2.0));
  const double c_bar_7 = std::pow(c_bar, 7.0);
  const double rc = 2.0 * std::sqrt(c_bar_7 / (c_bar_7 + pow25_7));
  const double l50 = (l_bar - 50.0) * (l_bar - 50.0);
  const double sl = 1.0 + 0.015 * l50 / std::sqrt(20.0 + l50);
  const double sc = 1.0 + 0.045 * c_bar;
  const double sh = 1.0 + 0.015 * c_bar * t;
  const double rt = -std::sin(deg2rad(2.0 * d_theta)) * rc;

  const double tl = dl / sl;
  const double tc = dc / sc;
  const double th = d_big_h / sh;
  return std::sqrt(std::max(0.0, tl * tl + tc * tc + th * th + rt * tc * th));
}

double ciede2000(const PlanarImage& a, const PlanarImage& b) {
  check_same(a, b, "ciede2000");
  if (a.channels() != 3) {
    fail(ErrorCode::kUnsupported, "ciede2000 needs three channel images");
  }
  const std::size_t n = a.pixel_count();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Lab la = srgb_to_lab(a.samples()[i], a.samples()[n + i],
                               a.samples()[2 * n + i]);
    const Lab lb = srgb_to_lab(b.samples()[i], b.samples()[n + i],
                               b.samples()[2 * n + i]);
    total += delta_e2000(la, lb);
  }
  return total / static_cast<double>(n);
}

MetricReport evaluate(const PlanarImage& restored, const PlanarImage& truth) {
  MetricReport r;
  r.psnr = psnr(restored, truth);
  r.ssim = ssim(restored, truth);
  if (restored.channels() == 3) r.ciede2000 = ciede2000(restored, truth);
  return r;
}

}  // namespace hazeorder
