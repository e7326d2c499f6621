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

#include "hazeorder/pipeline.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "checks.hpp"
#include "hazeorder/error.hpp"
#include "hazeorder/filters.hpp"
#include "oracles.hpp"
#include "scene.hpp"

namespace hazeorder {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

PlanarImage rgb_pixel(double r, double g, double b) {
  return PlanarImage::from_samples(1, 1, 3, {r, g, b});
}

ScalarMap one(double v) { return ScalarMap(1, 1, v); }

DehazeConfig no_clahe() {
  DehazeConfig cfg;
  cfg.apply_clahe = false;
  return cfg;
}

// Forward model --------------------------------------------------------------

TEST(SynthesizeHaze, ZeroDepthIsIdentity) {
  std::mt19937 rng(1);
  const PlanarImage clear = testing::textured_clear(40, 30, rng);
  const PlanarImage hazy =
      synthesize_haze(clear, SynthParams{1.3, AtmosphericLight({0.9, 0.8, 0.95}), ScalarMap(40, 30)});
  for (std::size_t i = 0; i < clear.samples().size(); ++i) {
    EXPECT_EQ(hazy.samples()[i], clear.samples()[i]);
  }
}

TEST(SynthesizeHaze, InfiniteDepthGivesAirlight) {
  const PlanarImage clear = rgb_pixel(0.1, 0.2, 0.3);
  const PlanarImage hazy =
      synthesize_haze(clear, SynthParams{1.0, AtmosphericLight({0.9, 0.8, 0.7}), one(kInf)});
  EXPECT_DOUBLE_EQ(hazy.at(0, 0, 0), 0.9);
  EXPECT_DOUBLE_EQ(hazy.at(1, 0, 0), 0.8);
  EXPECT_DOUBLE_EQ(hazy.at(2, 0, 0), 0.7);
}

TEST(SynthesizeHaze, HandExample) {
  const PlanarImage clear = PlanarImage::from_samples(1, 1, 1, {0.2});
  const PlanarImage hazy =
      synthesize_haze(clear, SynthParams{1.0, AtmosphericLight({1.0}), one(std::numbers::ln2)});
  EXPECT_NEAR(hazy.at(0, 0, 0), 0.6, 1e-12);
}

TEST(SynthesizeHaze, RejectsBadParameters) {
  const PlanarImage clear = rgb_pixel(0.1, 0.2, 0.3);
  const AtmosphericLight a({0.9, 0.9, 0.9});
  EXPECT_THROW(synthesize_haze(clear, SynthParams{0.0, a, one(1.0)}), Error);
  EXPECT_THROW(synthesize_haze(clear, SynthParams{1.0, a, one(-1.0)}), Error);
  EXPECT_THROW(synthesize_haze(clear, SynthParams{1.0, a, ScalarMap(2, 1)}), Error);
}

// Color difference and depth order -------------------------------------------

TEST(ColorDifference, HandExamples) {
  EXPECT_EQ(color_difference(rgb_pixel(0.8, 0.9, 1.0), AtmosphericLight({0.8, 0.9, 1.0}))[0], 0.0);
  EXPECT_NEAR(color_difference(rgb_pixel(0, 0, 0), AtmosphericLight({1, 1, 1}))[0],
              std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(color_difference(rgb_pixel(0.5, 0.5, 0.5), AtmosphericLight({0.8, 0.9, 1.0}))[0],
              0.70711, 1e-5);
  const PlanarImage gray = PlanarImage::from_samples(1, 1, 1, {0.3});
  EXPECT_NEAR(color_difference(gray, AtmosphericLight({0.9}))[0], 0.6, 1e-12);
}

TEST(ExtractDepthOrder, ConstantAndSinglePeak) {
  const ScalarMap flat(20, 20, 0.4);
  const ScalarMap flat_r = extract_depth_order(flat, 5);
  for (double v : flat_r.data()) EXPECT_EQ(v, 0.4);
  ScalarMap theta(21, 21, 0.1);
  theta(10, 10) = 0.9;
  const ScalarMap out = extract_depth_order(theta, 7);
  for (int y = 0; y < 21; ++y) {
    for (int x = 0; x < 21; ++x) {
      const bool inside = std::abs(x - 10) <= 3 && std::abs(y - 10) <= 3;
      EXPECT_EQ(out(x, y), inside ? 0.9 : 0.1) << x << "," << y;
    }
  }
  EXPECT_THROW(extract_depth_order(theta, 1), Error);
  EXPECT_THROW(extract_depth_order(theta, 4), Error);
}

TEST(ExtractDepthOrder, RowMeansFallWithDepth) {
  std::mt19937 rng(4);
  const int w = 160, h = 120;
  const PlanarImage clear = testing::textured_clear(w, h, rng);
  ScalarMap depth(w, h);
  // Depth grows towards the top of the frame.
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) depth(x, y) = 0.2 + 3.0 * (h - 1 - y) / (h - 1.0);
  }
  const AtmosphericLight a({0.9, 0.9, 0.9});
  const PlanarImage hazy = synthesize_haze(clear, SynthParams{1.0, a, depth});
  const ScalarMap theta_r = extract_depth_order(color_difference(hazy, a), 15);
  std::vector<double> means(h, 0.0);
  for (int y = 0; y < h; ++y) {
    for (double v : theta_r.row(y)) means[y] += v / w;
  }
  // Compare bands of rows so local texture cannot flip the trend.
  for (int band = 0; band + 1 < h / 20; ++band) {
    double upper = 0, lower = 0;
    for (int k = 0; k < 20; ++k) {
      upper += means[band * 20 + k];
      lower += means[(band + 1) * 20 + k];
    }
    EXPECT_LT(upper, lower) << band;
  }
}

// Normalization and weights --------------------------------------------------

TEST(Normalize, HandExamples) {
  const ScalarMap z = normalize(ScalarMap(3, 1, std::vector<double>{0.2, 1.2, 0.4}));
  EXPECT_EQ(z[0], 0.0);
  EXPECT_EQ(z[1], 1.0);
  EXPECT_NEAR(z[2], 0.2, 1e-12);
  const ScalarMap flat(4, 3, 0.7);
  const ScalarMap flat_z = normalize(flat);
  for (double v : flat_z.data()) EXPECT_EQ(v, 0.0);
}

TEST(Weight, ClosedForms) {
  EXPECT_EQ(apply_weight(0.0, WeightFunction::kPhi1), 0.0);
  EXPECT_EQ(apply_weight(1.0, WeightFunction::kPhi1), 1.0);
  EXPECT_EQ(apply_weight(0.5, WeightFunction::kPhi1), 0.75);
  EXPECT_EQ(apply_weight(0.37, WeightFunction::kPhi2), 0.37);
  EXPECT_EQ(apply_weight(0.5, WeightFunction::kPhi3), 0.25);
  EXPECT_THROW(weight(ScalarMap(1, 1), static_cast<WeightFunction>(9)), Error);
}

TEST(Weight, MonotoneOnUnitInterval) {
  for (WeightFunction fn : {WeightFunction::kPhi1, WeightFunction::kPhi2, WeightFunction::kPhi3}) {
    double prev = apply_weight(0.0, fn);
    for (int i = 1; i <= 1000; ++i) {
      const double cur = apply_weight(i / 1000.0, fn);
      ASSERT_GE(cur, prev);
      ASSERT_LE(cur, 1.0);
      prev = cur;
    }
  }
}

TEST(WeightFunctionNames, ParseAndPrint) {
  EXPECT_EQ(parse_weight_function("phi1"), WeightFunction::kPhi1);
  EXPECT_EQ(parse_weight_function("phi3"), WeightFunction::kPhi3);
  EXPECT_STREQ(weight_function_name(WeightFunction::kPhi2), "phi2");
  EXPECT_THROW(parse_weight_function("phi4"), Error);
}

// Boundary-constrained global parameter ----------------------------------------

TEST(BoundaryTransmission, HandExamples) {
  const AtmosphericLight a({0.8, 0.8, 0.8});
  EXPECT_EQ(boundary_transmission(rgb_pixel(0.8, 0.8, 0.8), a)[0], 0.0);
  EXPECT_NEAR(boundary_transmission(rgb_pixel(1, 1, 1), a)[0], 1.0, 1e-12);
  EXPECT_NEAR(boundary_transmission(rgb_pixel(0, 0, 0), a)[0], 1.0, 1e-12);
  EXPECT_NEAR(boundary_transmission(rgb_pixel(0.4, 0.8, 0.9), a)[0], 0.5, 1e-12);
}

TEST(BoundaryTheta, HandExamples) {
  EXPECT_DOUBLE_EQ(boundary_theta(one(0.3), one(1.0), one(1.0), WeightFunction::kPhi2)[0], 0.3);
  EXPECT_NEAR(boundary_theta(one(0.3), one(0.5), one(0.5), WeightFunction::kPhi2)[0], 0.9, 1e-12);
  EXPECT_EQ(boundary_theta(one(0.3), one(0.5), one(0.0), WeightFunction::kPhi2)[0], kInf);
  EXPECT_EQ(boundary_theta(one(0.3), one(0.0), one(0.7), WeightFunction::kPhi2)[0], kInf);
}

TEST(Sortp, Percentiles) {
  const std::vector<double> v = {4, 1, 3, 2};
  EXPECT_EQ(sortp(v, 0.0), 1.0);
  EXPECT_EQ(sortp(v, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(*sortp(v, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(*sortp(v, 0.25), 1.75);
  const std::vector<double> with_inf = {kInf, 2.0, kInf, 1.0};
  EXPECT_EQ(sortp(with_inf, 1.0), 2.0);
  const std::vector<double> none = {kInf, kInf};
  EXPECT_FALSE(sortp(none, 0.5).has_value());
  EXPECT_THROW(sortp(v, 1.5), Error);
}

TEST(Sortp, MatchesSortedInterpolation) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(1 + trial * 7);
    for (double& x : v) x = u(rng);
    std::vector<double> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    for (double eps : {0.0, 0.02, 0.3, 0.77, 1.0}) {
      const double pos = eps * (sorted.size() - 1);
      const std::size_t lo = static_cast<std::size_t>(pos);
      const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
      const double expected = sorted[lo] + (pos - lo) * (sorted[hi] - sorted[lo]);
      ASSERT_NEAR(*sortp(v, eps), expected, 1e-12);
    }
  }
}

TEST(GlobalThetaHat, TakesTheLarger) {
  const ScalarMap theta_r(2, 1, std::vector<double>{0.4, 0.9});
  EXPECT_EQ(global_theta_hat(0.5, theta_r), 0.9);
  EXPECT_EQ(global_theta_hat(1.5, theta_r), 1.5);
}

// Transformation and transmission --------------------------------------------

TEST(TransformTheta, HandExamples) {
  const ScalarMap theta_r(2, 1, std::vector<double>{0.4, 0.7});
  const ScalarMap zero = transform_theta(theta_r, ScalarMap(2, 1, 0.0), 1.2);
  EXPECT_EQ(zero[0], 0.4);
  EXPECT_EQ(zero[1], 0.7);
  const ScalarMap full = transform_theta(theta_r, ScalarMap(2, 1, 1.0), 1.2);
  EXPECT_DOUBLE_EQ(full[0], 1.2);
  EXPECT_DOUBLE_EQ(full[1], 1.2);
  EXPECT_NEAR(transform_theta(one(0.4), one(0.25), 1.2)[0], 0.6, 1e-12);
}

TEST(Transmission, HandExamples) {
  EXPECT_EQ(transmission(one(0.6), one(0.6), 0.01)[0], 1.0);
  EXPECT_NEAR(transmission(one(0.3), one(0.9), 0.01)[0], 1.0 / 3.0, 1e-12);
  EXPECT_EQ(transmission(one(0.0), one(0.5), 0.01)[0], 0.01);
  EXPECT_EQ(transmission(one(0.0), one(0.0), 0.01)[0], 0.01);
}

TEST(Recover, HandExamples) {
  const PlanarImage hazy = PlanarImage::from_samples(1, 1, 1, {0.75});
  EXPECT_NEAR(recover(hazy, one(0.5), AtmosphericLight({1.0})).at(0, 0, 0), 0.5, 1e-12);
  std::mt19937 rng(6);
  const PlanarImage img = testing::textured_clear(30, 20, rng);
  const PlanarImage same = recover(img, ScalarMap(30, 20, 1.0), AtmosphericLight({0.9, 0.9, 0.9}));
  for (std::size_t i = 0; i < img.samples().size(); ++i) {
    EXPECT_NEAR(same.samples()[i], img.samples()[i], 1e-12);
  }
}

TEST(Recover, InvertsSynthesis) {
  for (std::uint32_t seed = 100; seed < 105; ++seed) {
    const testing::Scene s = testing::make_scene(seed);
    const std::vector<double> back = recover_unclamped(s.hazy, s.transmission, s.airlight);
    for (std::size_t i = 0; i < back.size(); ++i) {
      ASSERT_NEAR(back[i], s.clear.samples()[i], 1e-6);
    }
  }
}

TEST(CountOverflow, SamplesAndPixels) {
  // Two pixels, two channels; pixel 0 overflows in both channels.
  const std::vector<double> v = {1.2, 0.5, -0.1, 0.5};
  const OverflowStats s = count_overflow(v, 2, 1, 2);
  EXPECT_EQ(s.samples, 2u);
  EXPECT_EQ(s.pixels, 1u);
  EXPECT_DOUBLE_EQ(s.sample_fraction, 0.5);
  EXPECT_DOUBLE_EQ(s.pixel_fraction, 0.5);
}

// Properties ---------------------------------------------------------------

TEST(Properties, OrderPreservedAndBoundHoldOnRandomMaps) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> dim(8, 64);
  std::uniform_real_distribution<double> scale(1.0, 1.5);
  for (int trial = 0; trial < 100; ++trial) {
    const ScalarMap theta = testing::random_map(dim(rng), dim(rng), rng, 0.0, std::sqrt(3.0));
    const ScalarMap theta_r = extract_depth_order(theta, 3);
    const ScalarMap z = normalize(theta_r);
    const double theta_hat = global_theta_hat(scale(rng) * theta_r.max(), theta_r);
    for (WeightFunction fn : {WeightFunction::kPhi1, WeightFunction::kPhi2, WeightFunction::kPhi3}) {
      const ScalarMap clear = transform_theta(theta_r, weight(z, fn), theta_hat);
      ASSERT_EQ(testing::order_violations(theta_r, clear), 0u) << trial;
      ASSERT_EQ(testing::bound_violations(theta_r, clear), 0u) << trial;
    }
  }
}

TEST(Properties, TransmissionWithinRangeOnScenes) {
  for (std::uint32_t seed = 200; seed < 205; ++seed) {
    const testing::Scene s = testing::make_scene(seed);
    const DehazeResult r = dehaze(s.hazy, no_clahe());
    EXPECT_GE(r.trace.theta_hat_clear, r.trace.theta_r_haze.max());
    for (std::size_t i = 0; i < r.trace.t_raw.size(); ++i) {
      ASSERT_GT(r.trace.theta_r_haze[i] / r.trace.theta_r_clear[i], 0.0);
      ASSERT_LE(r.trace.theta_r_haze[i] / r.trace.theta_r_clear[i], 1.0);
      ASSERT_GE(r.trace.t_refined[i], 0.01);
      ASSERT_LE(r.trace.t_refined[i], 1.0);
    }
  }
}

TEST(Properties, MeanThetaFallsWithBeta) {
  testing::SceneOptions opts;
  const testing::Scene s = testing::make_scene(300, opts);
  double prev = kInf;
  for (double beta : {0.25, 0.5, 1.0, 1.5, 2.0, 3.0}) {
    const PlanarImage hazy = synthesize_haze(s.clear, SynthParams{beta, s.airlight, s.depth});
    const double mean = extract_depth_order(color_difference(hazy, s.airlight), 35).mean();
    EXPECT_LT(mean, prev) << beta;
    prev = mean;
  }
}

// End to end ---------------------------------------------------------------

TEST(Dehaze, TraceShapesMatchInput) {
  std::mt19937 rng(8);
  const PlanarImage clear = testing::textured_clear(600, 400, rng);
  ScalarMap depth = testing::smooth_field(600, 400, rng);
  for (double& d : depth.data()) d = 0.3 + 2.0 * d;
  const PlanarImage hazy =
      synthesize_haze(clear, SynthParams{1.0, AtmosphericLight({0.9, 0.92, 0.95}), depth});
  const DehazeResult r = dehaze(hazy, DehazeConfig{});
  ASSERT_TRUE(r.image.same_shape(hazy));
  for (const ScalarMap* m : {&r.trace.theta_haze, &r.trace.theta_r_haze, &r.trace.z, &r.trace.w,
                             &r.trace.t_boundary, &r.trace.theta_r_clear, &r.trace.t_raw,
                             &r.trace.t_refined}) {
    EXPECT_EQ(m->width(), 600);
    EXPECT_EQ(m->height(), 400);
    EXPECT_EQ(m->size(), hazy.pixel_count());
  }
  EXPECT_TRUE(testing::all_finite(r.image.samples()));
}

TEST(Dehaze, ImprovesPsnrOnSynthesizedScenes) {
  for (std::uint32_t seed = 400; seed < 405; ++seed) {
    const testing::Scene s = testing::make_scene(seed);
    const DehazeResult r = dehaze(s.hazy, DehazeConfig{});
    double before = 0, after = 0;
    for (std::size_t i = 0; i < s.clear.samples().size(); ++i) {
      const double c = s.clear.samples()[i];
      before += (s.hazy.samples()[i] - c) * (s.hazy.samples()[i] - c);
      after += (r.image.samples()[i] - c) * (r.image.samples()[i] - c);
    }
    EXPECT_LT(after, before) << seed;
  }
}

TEST(Dehaze, FlatClearSceneBarelyChanges) {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> jitter(-0.02, 0.02);
  for (int trial = 0; trial < 5; ++trial) {
    const int w = 80, h = 60;
    const std::size_t n = static_cast<std::size_t>(w) * h;
    const ScalarMap field = testing::smooth_field(w, h, rng, 3);
    // Haze free: one channel sits at zero so every pixel touches the boundary.
    std::vector<double> s(3 * n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = 0.0;
      s[n + i] = 0.5 + 0.03 * field[i] + jitter(rng);
      s[2 * n + i] = 0.3 + 0.03 * field[i] + jitter(rng);
    }
    const PlanarImage clear = PlanarImage::from_samples(w, h, 3, std::move(s));
    DehazeConfig cfg = no_clahe();
    cfg.airlight = AtmosphericLight({1.0, 1.0, 1.0});
    const DehazeResult r = dehaze(clear, cfg);
    EXPECT_LE(r.trace.theta_eps, r.trace.theta_r_haze.max());
    double change = 0.0;
    for (std::size_t i = 0; i < clear.samples().size(); ++i) {
      change += std::abs(r.image.samples()[i] - clear.samples()[i]);
    }
    EXPECT_LT(change / clear.samples().size(), 0.05);
  }
}

TEST(Dehaze, ConstantImageStaysConstant) {
  for (double v : {0.0, 0.4, 0.9, 1.0}) {
    const PlanarImage img = PlanarImage::from_samples(40, 40, 3, std::vector<double>(4800, v));
    const DehazeResult r = dehaze(img, no_clahe());
    const double first = r.image.samples()[0];
    for (double s : r.image.samples()) {
      ASSERT_TRUE(std::isfinite(s));
      ASSERT_NEAR(s, first, 1e-12) << v;
    }
  }
}

TEST(Dehaze, ThetaHatScaleOverridesOptimization) {
  const testing::Scene s = testing::make_scene(500);
  DehazeConfig cfg = no_clahe();
  cfg.theta_hat_scale = 1.2;
  const DehazeResult r = dehaze(s.hazy, cfg);
  EXPECT_NEAR(r.trace.theta_hat_clear, 1.2 * r.trace.theta_r_haze.max(), 1e-12);
  EXPECT_TRUE(r.trace.t_boundary.empty());
  cfg.theta_hat_scale = 0.9;
  EXPECT_THROW(dehaze(s.hazy, cfg), Error);
}

TEST(Dehaze, RejectsBadConfigAndTinyImages) {
  const PlanarImage img = PlanarImage::from_samples(34, 34, 1, std::vector<double>(34 * 34, 0.5));
  try {
    dehaze(img, DehazeConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
  }
  DehazeConfig cfg;
  cfg.r = 4;
  EXPECT_THROW(dehaze(img, cfg), Error);
  cfg = DehazeConfig{};
  cfg.epsilon = 1.5;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = DehazeConfig{};
  cfg.t_floor = 0.0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = DehazeConfig{};
  cfg.airlight = AtmosphericLight({0.9, 0.9, 0.9});
  cfg.r = 3;
  EXPECT_THROW(dehaze(img, cfg), Error);
}

TEST(Dehaze, IsDeterministic) {
  const testing::Scene s = testing::make_scene(600);
  const DehazeResult a = dehaze(s.hazy, DehazeConfig{});
  const DehazeResult b = dehaze(s.hazy, DehazeConfig{});
  EXPECT_EQ(to_bytes(a.image), to_bytes(b.image));
  EXPECT_EQ(a.trace.theta_hat_clear, b.trace.theta_hat_clear);
}

}  // namespace
}  // namespace hazeorder
