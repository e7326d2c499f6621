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

#include <algorithm>
#include <array>
#include <vector>

#include "hazeorder/error.hpp"
#include "hazeorder/filters.hpp"

namespace hazeorder {
namespace {

constexpr int kBins = 256;
using Lut = std::array<double, kBins>;

// Tile boundaries along one axis plus, for every pixel coordinate, the two
// neighbouring tile centres and the blend weight toward the second one.
struct AxisLayout {
  std::vector<int> begin;  // tiles + 1 entries
  std::vector<int> lo;
  std::vector<int> hi;
  std::vector<double> frac;
};

AxisLayout layout_axis(int extent, int tiles) {
  AxisLayout a;
  a.begin.resize(tiles + 1);
  for (int t = 0; t <= tiles; ++t) {
    a.begin[t] = static_cast<int>(static_cast<long long>(t) * extent / tiles);
  }
  std::vector<double> centre(tiles);
  for (int t = 0; t < tiles; ++t) {
    centre[t] = 0.5 * (a.begin[t] + a.begin[t + 1]) - 0.5;
  }
  a.lo.resize(extent);
  a.hi.resize(extent);
  a.frac.resize(extent);
  int t = 0;
  for (int x = 0; x < extent; ++x) {
    while (t + 1 < tiles && centre[t + 1] <= x) ++t;
    if (x <= centre[0]) {
      a.lo[x] = a.hi[x] = 0;
      a.frac[x] = 0.0;
    } else if (t + 1 >= tiles) {
      a.lo[x] = a.hi[x] = tiles - 1;
      a.frac[x] = 0.0;
    } else {
      a.lo[x] = t;
      a.hi[x] = t + 1;
      a.frac[x] = (x - centre[t]) / (centre[t + 1] - centre[t]);
    }
  }
  return a;
}

Lut tile_lut(const std::vector<std::uint8_t>& bins, int width, int x0, int x1,
             int y0, int y1, double clip) {
  std::array<double, kBins> hist{};
  for (int y = y0; y < y1; ++y) {
    const std::uint8_t* row = &bins[static_cast<std::size_t>(y) * width];
    for (int x = x0; x < x1; ++x) hist[row[x]] += 1.0;
  }
  const double pixels = static_cast<double>(x1 - x0) * (y1 - y0);
  const double limit = std::max(1.0, clip * pixels / kBins);
  double excess = 0.0;
  for (double& count : hist) {
    if (count > limit) {
      excess += count - limit;
      count = limit;
    }
  }
  const double share = excess / kBins;
  Lut lut;
  double cdf = 0.0;
  for (int b = 0; b < kBins; ++b) {
    cdf += hist[b] + share;
    lut[b] = std::min(1.0, cdf / pixels);
  }
  return lut;
}

}  // namespace

ScalarMap clahe_plane(const ScalarMap& plane, const ClaheParams& params) {
  if (params.tiles_x < 1 || params.tiles_y < 1) {
    fail(ErrorCode::kConfig, "CLAHE tile grid must be at least 1x1");
  }
  const int w = plane.width();
  const int h = plane.height();
  int tx = params.tiles_x;
  int ty = params.tiles_y;
  if (w < tx || h < ty) tx = ty = 1;

  std::vector<std::uint8_t> bins(plane.size());
  for (std::size_t i = 0; i < plane.size(); ++i) bins[i] = quantize(plane[i]);

  const AxisLayout ax = layout_axis(w, tx);
  const AxisLayout ay = layout_axis(h, ty);
  std::vector<Lut> luts(static_cast<std::size_t>(tx) * ty);
  for (int j = 0; j < ty; ++j) {
    for (int i = 0; i < tx; ++i) {
      luts[j * tx + i] = tile_lut(bins, w, ax.begin[i], ax.begin[i + 1],
                                  ay.begin[j], ay.begin[j + 1], params.clip);
    }
  }

  ScalarMap out(w, h);
  for (int y = 0; y < h; ++y) {
    const Lut* top_l = &luts[ay.lo[y] * tx];
    const Lut* bot_l = &luts[ay.hi[y] * tx];
    const double fy = ay.frac[y];
    for (int x = 0; x < w; ++x) {
      const int b = bins[static_cast<std::size_t>(y) * w + x];
      const double fx = ax.frac[x];
      const double top = (1.0 - fx) * top_l[ax.lo[x]][b] + fx * top_l[ax.hi[x]][b];
      const double bot = (1.0 - fx) * bot_l[ax.lo[x]][b] + fx * bot_l[ax.hi[x]][b];
      out(x, y) = (1.0 - fy) * top + fy * bot;
    }
  }
  return out;
}

PlanarImage clahe(const PlanarImage& img, const ClaheParams& params) {
  if (img.channels() == 1) {
    const ScalarMap eq = clahe_plane(img.channel(0), params);
    return PlanarImage::clamped(img.width(), img.height(), 1,
                                std::vector<double>(eq.data().begin(),
                                                    eq.data().end()));
  }
  const ScalarMap y = luma(img);
  const ScalarMap eq = clahe_plane(y, params);
  // Chroma differences (R - Y, B - Y) are kept, so every channel moves by
  // the same luma delta.
  const std::size_t n = img.pixel_count();
  std::vector<double> samples(img.samples().begin(), img.samples().end());
  for (std::size_t i = 0; i < n; ++i) {
    const double delta = eq[i] - y[i];
    for (int c = 0; c < 3; ++c) samples[c * n + i] += delta;
  }
  return PlanarImage::clamped(img.width(), img.height(), 3, std::move(samples));
}

}  // namespace hazeorder
