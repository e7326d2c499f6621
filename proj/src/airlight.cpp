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

#include "hazeorder/airlight.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "hazeorder/filters.hpp"

namespace hazeorder {

ScalarMap dark_channel(const PlanarImage& img, int window) {
  // Min filter as the negated dilation of the negated map.
  ScalarMap neg(img.width(), img.height());
  const std::size_t n = img.pixel_count();
  for (std::size_t i = 0; i < n; ++i) {
    double m = img.samples()[i];
    for (int c = 1; c < img.channels(); ++c) {
      m = std::min(m, img.samples()[c * n + i]);
    }
    neg[i] = -m;
  }
  ScalarMap dark = max_filter(neg, window);
  for (double& v : dark.data()) v = -v;
  return dark;
}

AtmosphericLight estimate_airlight(const PlanarImage& hazy) {
  const ScalarMap dark = dark_channel(hazy, kAirlightPatch);
  const std::size_t n = dark.size();
  const std::size_t count = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(kAirlightTopFraction * n)));

  // Brightest first; ties broken by index so the selection is deterministic.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto brighter = [&](std::size_t a, std::size_t b) {
    return dark[a] != dark[b] ? dark[a] > dark[b] : a < b;
  };
  std::nth_element(order.begin(), order.begin() + (count - 1), order.end(),
                   brighter);

  std::vector<double> a(hazy.channels(), 0.0);
  for (int c = 0; c < hazy.channels(); ++c) {
    auto plane = hazy.plane(c);
    double sum = 0.0;
    for (std::size_t k = 0; k < count; ++k) sum += plane[order[k]];
    a[c] = std::clamp(sum / static_cast<double>(count), kAirlightMin,
                      kAirlightMax);
  }
  return AtmosphericLight(std::move(a));
}

}  // namespace hazeorder
