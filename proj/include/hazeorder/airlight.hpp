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

#ifndef HAZEORDER_AIRLIGHT_HPP_
#define HAZEORDER_AIRLIGHT_HPP_

#include "hazeorder/image.hpp"

namespace hazeorder {

inline constexpr int kAirlightPatch = 15;
inline constexpr double kAirlightTopFraction = 0.001;
inline constexpr double kAirlightMin = 0.05;
inline constexpr double kAirlightMax = 1.0 - AtmosphericLight::kUpperMargin;

// Dark channel of an image: per-pixel minimum over channels followed by a
// window x window minimum filter.
ScalarMap dark_channel(const PlanarImage& img, int window = kAirlightPatch);

// Averages the hazy image over the brightest 0.1% of its dark channel.
// Components are clamped to [kAirlightMin, kAirlightMax].
AtmosphericLight estimate_airlight(const PlanarImage& hazy);

}  // namespace hazeorder

#endif  // HAZEORDER_AIRLIGHT_HPP_
