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

#ifndef HAZEORDER_CONFIG_HPP_
#define HAZEORDER_CONFIG_HPP_

#include <optional>
#include <string>
#include <string_view>

#include "hazeorder/image.hpp"

namespace hazeorder {

// Interpolation weight as a function of normalized theta_r. All three are
// monotonically increasing on [0,1] with phi(0) = 0 and phi(1) = 1.
enum class WeightFunction {
  kPhi1,  // z * (2 - z), concave
  kPhi2,  // z
  kPhi3,  // z^2, convex
};

WeightFunction parse_weight_function(std::string_view name);
const char* weight_function_name(WeightFunction fn);

struct ClaheParams {
  int tiles_x = 8;
  int tiles_y = 8;
  // Histogram bins are clipped at clip * (tile_pixels / 256).
  double clip = 2.0;
};

struct DehazeConfig {
  int r = 35;
  double epsilon = 0.02;
  WeightFunction weight_fn = WeightFunction::kPhi2;
  // Side length of the guided filter window (odd).
  int guided_radius = 35;
  double guided_eps = 1e-4;
  double t_floor = 0.01;
  bool apply_clahe = true;
  ClaheParams clahe;
  // Overrides airlight estimation when set.
  std::optional<AtmosphericLight> airlight;
  // When set, theta_hat = scale * max(theta_r) replaces the boundary
  // optimization. Used to reproduce fixed-ratio comparisons.
  std::optional<double> theta_hat_scale;

  // Throws kConfig describing the first violated constraint.
  void validate() const;
};

}  // namespace hazeorder

#endif  // HAZEORDER_CONFIG_HPP_
