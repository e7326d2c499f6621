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

#include "hazeorder/filters.hpp"

#include <algorithm>
#include <string>

#include "hazeorder/error.hpp"

namespace hazeorder {
namespace {

void check_window(int window) {
  if (window < 1 || window % 2 == 0) {
    fail(ErrorCode::kConfig,
         "window size must be odd and >= 1, got " + std::to_string(window));
  }
}

inline int clamp_index(int i, int n) { return std::clamp(i, 0, n - 1); }

// van Herk / Gil-Werman running maximum over one replicated line. `line` has
// n samples; `out` receives n samples. prefix/suffix are scratch buffers.
void vhgw_line(std::span<const double> line, int window, std::span<double> out,
               std::vector<double>& prefix, std::vector<double>& suffix) {
  const int n = static_cast<int>(line.size());
  const int half = window / 2;
  const int padded = n + 2 * half;
  prefix.resize(padded);
  suffix.resize(padded);
  auto sample = [&](int j) { return line[clamp_index(j - half, n)]; };

  for (int j = 0; j < padded; ++j) {
    const double v = sample(j);
    prefix[j] = (j % window == 0) ? v : std::max(prefix[j - 1], v);
  }
  for (int j = padded - 1; j >= 0; --j) {
    const double v = sample(j);
    const bool block_end = (j % window == window - 1) || j == padded - 1;
    suffix[j] = block_end ? v : std::max(suffix[j + 1], v);
  }
  for (int i = 0; i < n; ++i) {
    out[i] = std::max(suffix[i], prefix[i + window - 1]);
  }
}

}  // namespace

IntegralImage::IntegralImage(const ScalarMap& m)
    : width_(m.width()), height_(m.height()),
      table_(static_cast<std::size_t>(m.width() + 1) * (m.height() + 1), 0.0) {
  const std::size_t stride = width_ + 1;
  for (int y = 0; y < height_; ++y) {
    double row_sum = 0.0;
    auto src = m.row(y);
    double* above = &table_[y * stride];
    double* cur = &table_[(y + 1) * stride];
    for (int x = 0; x < width_; ++x) {
      row_sum += src[x];
      cur[x + 1] = above[x + 1] + row_sum;
    }
  }
}

ScalarMap max_filter(const ScalarMap& m, int window) {
  check_window(window);
  if (window == 1) return m;
  const int w = m.width();
  const int h = m.height();

  // Horizontal pass.
  ScalarMap horiz(w, h);
  std::vector<double> prefix, suffix;
  for (int y = 0; y < h; ++y) {
    vhgw_line(m.row(y), window, horiz.row(y), prefix, suffix);
  }

  // Vertical pass, whole rows at a time so the inner loop stays contiguous.
  const int half = window / 2;
  const int padded = h + 2 * half;
  std::vector<double> col_prefix(static_cast<std::size_t>(padded) * w);
  std::vector<double> col_suffix(static_cast<std::size_t>(padded) * w);
  auto src_row = [&](int j) { return horiz.row(clamp_index(j - half, h)); };

  for (int j = 0; j < padded; ++j) {
    auto src = src_row(j);
    double* dst = &col_prefix[static_cast<std::size_t>(j) * w];
    if (j % window == 0) {
      std::copy(src.begin(), src.end(), dst);
    } else {
      const double* prev = dst - w;
      for (int x = 0; x < w; ++x) dst[x] = std::max(prev[x], src[x]);
    }
  }
  for (int j = padded - 1; j >= 0; --j) {
    auto src = src_row(j);
    double* dst = &col_suffix[static_cast<std::size_t>(j) * w];
    if (j % window == window - 1 || j == padded - 1) {
      std::copy(src.begin(), src.end(), dst);
    } else {
      const double* next = dst + w;
      for (int x = 0; x < w; ++x) dst[x] = std::max(next[x], src[x]);
    }
  }

  ScalarMap out(w, h);
  for (int y = 0; y < h; ++y) {
    const double* s = &col_suffix[static_cast<std::size_t>(y) * w];
    const double* p = &col_prefix[static_cast<std::size_t>(y + window - 1) * w];
    auto dst = out.row(y);
    for (int x = 0; x < w; ++x) dst[x] = std::max(s[x], p[x]);
  }
  return out;
}

ScalarMap box_mean(const ScalarMap& m, int window) {
  check_window(window);
  const int w = m.width();
  const int h = m.height();
  const int half = window / 2;

  // Integral image of the edge-replicated extension.
  ScalarMap extended(w + 2 * half, h + 2 * half);
  for (int y = 0; y < extended.height(); ++y) {
    auto src = m.row(clamp_index(y - half, h));
    auto dst = extended.row(y);
    for (int x = 0; x < extended.width(); ++x) {
      dst[x] = src[clamp_index(x - half, w)];
    }
  }
  const IntegralImage sat(extended);

  const double inv_area = 1.0 / (static_cast<double>(window) * window);
  ScalarMap out(w, h);
  for (int y = 0; y < h; ++y) {
    auto dst = out.row(y);
    for (int x = 0; x < w; ++x) {
      dst[x] = sat.box_sum(x, y, x + window, y + window) * inv_area;
    }
  }
  return out;
}

ScalarMap guided_filter(const ScalarMap& input, const ScalarMap& guide,
                        int window, double eps) {
  if (!input.same_shape(guide)) {
    fail(ErrorCode::kStructural, "guided filter input and guide differ in size");
  }
  if (!(eps > 0.0)) fail(ErrorCode::kConfig, "guided filter eps must be > 0");
  check_window(window);

  const std::size_t n = input.size();
  const int w = input.width();
  const int h = input.height();
  ScalarMap guide_sq(w, h), cross(w, h);
  for (std::size_t i = 0; i < n; ++i) {
    guide_sq[i] = guide[i] * guide[i];
    cross[i] = guide[i] * input[i];
  }
  const ScalarMap mean_i = box_mean(guide, window);
  const ScalarMap mean_p = box_mean(input, window);
  const ScalarMap mean_ii = box_mean(guide_sq, window);
  const ScalarMap mean_ip = box_mean(cross, window);

  ScalarMap a(w, h), b(w, h);
  for (std::size_t i = 0; i < n; ++i) {
    const double var = mean_ii[i] - mean_i[i] * mean_i[i];
    const double cov = mean_ip[i] - mean_i[i] * mean_p[i];
    a[i] = cov / (var + eps);
    b[i] = mean_p[i] - a[i] * mean_i[i];
  }
  const ScalarMap mean_a = box_mean(a, window);
  const ScalarMap mean_b = box_mean(b, window);

  ScalarMap q(w, h);
  for (std::size_t i = 0; i < n; ++i) q[i] = mean_a[i] * guide[i] + mean_b[i];
  return q;
}

}  // namespace hazeorder
