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

#ifndef HAZEORDER_FILTERS_HPP_
#define HAZEORDER_FILTERS_HPP_

#include <cstddef>
#include <vector>

#include "hazeorder/config.hpp"
#include "hazeorder/image.hpp"

namespace hazeorder {

// Summed-area table with one row and column of zero padding:
// S(x, y) = sum of m over [0, x) x [0, y).
class IntegralImage {
 public:
  explicit IntegralImage(const ScalarMap& m);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  double at(int x, int y) const noexcept {
    return table_[static_cast<std::size_t>(y) * (width_ + 1) + x];
  }
  // Sum over the half-open rectangle [x0, x1) x [y0, y1).
  double box_sum(int x0, int y0, int x1, int y1) const noexcept {
    return at(x1, y1) - at(x0, y1) - at(x1, y0) + at(x0, y0);
  }

 private:
  int width_;
  int height_;
  std::vector<double> table_;
};

// All window filters take the full (odd) side length of a square window
// centred on each pixel and replicate edge samples outside the map.

// Grayscale dilation in O(1) per pixel, independent of window.
ScalarMap max_filter(const ScalarMap& m, int window);

ScalarMap box_mean(const ScalarMap& m, int window);

// Edge-preserving smoothing of input using the local linear model
// q = a * guide + b fitted in every window.
ScalarMap guided_filter(const ScalarMap& input, const ScalarMap& guide,
                        int window, double eps);

// Contrast limited adaptive histogram equalization. Three channel images are
// equalized on BT.601 luma with chroma differences carried over.
PlanarImage clahe(const PlanarImage& img, const ClaheParams& params = {});

// Equalizes one [0,1] plane in place of a luma channel.
ScalarMap clahe_plane(const ScalarMap& plane, const ClaheParams& params);

}  // namespace hazeorder

#endif  // HAZEORDER_FILTERS_HPP_
