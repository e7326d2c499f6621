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

#include "hazeorder/hazeorder.h"

#include <exception>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "hazeorder/airlight.hpp"
#include "hazeorder/analysis.hpp"
#include "hazeorder/config.hpp"
#include "hazeorder/error.hpp"
#include "hazeorder/image.hpp"
#include "hazeorder/io.hpp"
#include "hazeorder/metrics.hpp"
#include "hazeorder/pipeline.hpp"

struct hz_image {
  hazeorder::PlanarImage img;
};
struct hz_map {
  hazeorder::ScalarMap map;
};
struct hz_config {
  hazeorder::DehazeConfig cfg;
};
struct hz_trace {
  hazeorder::PipelineTrace trace;
  // Handles aliasing the trace maps, indexed by hz_trace_map.
  std::vector<std::unique_ptr<hz_map>> maps;
};

namespace {

using hazeorder::ErrorCode;

thread_local std::string g_last_error;

hz_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfig: return HZ_ERR_CONFIG;
    case ErrorCode::kStructural: return HZ_ERR_STRUCTURAL;
    case ErrorCode::kIo: return HZ_ERR_IO;
    case ErrorCode::kValidation: return HZ_ERR_VALIDATION;
    case ErrorCode::kUnsupported: return HZ_ERR_UNSUPPORTED;
  }
  return HZ_ERR_INTERNAL;
}

hz_status set_error(hz_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs fn, translating exceptions into status codes.
template <typename F>
hz_status guard(F&& fn) {
  try {
    fn();
    g_last_error.clear();
    return HZ_OK;
  } catch (const hazeorder::Error& e) {
    return set_error(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(HZ_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(HZ_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(HZ_ERR_INTERNAL, "unknown error");
  }
}

#define HZ_REQUIRE(cond, what)                                     \
  do {                                                             \
    if (!(cond)) return set_error(HZ_ERR_INVALID_ARGUMENT, what);  \
  } while (0)

std::vector<double> airlight_vector(const double* a, size_t n) {
  return std::vector<double>(a, a + n);
}

}  // namespace

extern "C" {

const char* hz_version(void) { return "0.1.0"; }

const char* hz_status_string(hz_status status) {
  switch (status) {
    case HZ_OK: return "ok";
    case HZ_ERR_CONFIG: return "configuration error";
    case HZ_ERR_STRUCTURAL: return "structural error";
    case HZ_ERR_IO: return "i/o error";
    case HZ_ERR_VALIDATION: return "validation error";
    case HZ_ERR_UNSUPPORTED: return "unsupported";
    case HZ_ERR_INVALID_ARGUMENT: return "invalid argument";
    case HZ_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* hz_last_error(void) { return g_last_error.c_str(); }

// Images ---------------------------------------------------------------------

hz_status hz_image_from_bytes(const uint8_t* interleaved, size_t len, int width,
                              int height, int channels, hz_image** out) {
  HZ_REQUIRE(out != nullptr, "null output handle");
  HZ_REQUIRE(interleaved != nullptr || len == 0, "null byte buffer");
  *out = nullptr;
  return guard([&] {
    auto img = std::make_unique<hz_image>();
    img->img = hazeorder::from_bytes({interleaved, len}, width, height, channels);
    *out = img.release();
  });
}

hz_status hz_image_from_samples(const double* planar, size_t len, int width,
                                int height, int channels, hz_image** out) {
  HZ_REQUIRE(out != nullptr, "null output handle");
  HZ_REQUIRE(planar != nullptr || len == 0, "null sample buffer");
  *out = nullptr;
  return guard([&] {
    auto img = std::make_unique<hz_image>();
    img->img = hazeorder::PlanarImage::from_samples(
        width, height, channels, std::vector<double>(planar, planar + len));
    *out = img.release();
  });
}

hz_status hz_image_to_bytes(const hz_image* img, uint8_t* interleaved, size_t len) {
  HZ_REQUIRE(img != nullptr && interleaved != nullptr, "null argument");
  HZ_REQUIRE(len == img->img.samples().size(), "byte buffer length must equal width*height*channels");
  return guard([&] {
    const auto bytes = hazeorder::to_bytes(img->img);
    std::copy(bytes.begin(), bytes.end(), interleaved);
  });
}

int hz_image_width(const hz_image* img) { return img ? img->img.width() : 0; }
int hz_image_height(const hz_image* img) { return img ? img->img.height() : 0; }
int hz_image_channels(const hz_image* img) { return img ? img->img.channels() : 0; }
const double* hz_image_samples(const hz_image* img) {
  return img ? img->img.samples().data() : nullptr;
}

hz_status hz_image_read(const char* path, hz_image** out) {
  HZ_REQUIRE(path != nullptr && out != nullptr, "null argument");
  *out = nullptr;
  return guard([&] {
    auto img = std::make_unique<hz_image>();
    img->img = hazeorder::read_image(path);
    *out = img.release();
  });
}

hz_status hz_image_write_png(const hz_image* img, const char* path) {
  HZ_REQUIRE(img != nullptr && path != nullptr, "null argument");
  return guard([&] { hazeorder::write_png(path, img->img); });
}

hz_status hz_image_write_pnm(const hz_image* img, const char* path) {
  HZ_REQUIRE(img != nullptr && path != nullptr, "null argument");
  return guard([&] { hazeorder::write_pnm(path, img->img); });
}

void hz_image_free(hz_image* img) { delete img; }

// Maps -----------------------------------------------------------------------

hz_status hz_map_create(int width, int height, const double* data, hz_map** out) {
  HZ_REQUIRE(out != nullptr, "null output handle");
  *out = nullptr;
  return guard([&] {
    auto m = std::make_unique<hz_map>();
    if (data != nullptr) {
      const size_t n = static_cast<size_t>(width > 0 ? width : 0) *
                       static_cast<size_t>(height > 0 ? height : 0);
      m->map = hazeorder::ScalarMap(width, height, std::vector<double>(data, data + n));
    } else {
      m->map = hazeorder::ScalarMap(width, height);
    }
    *out = m.release();
  });
}

int hz_map_width(const hz_map* m) { return m ? m->map.width() : 0; }
int hz_map_height(const hz_map* m) { return m ? m->map.height() : 0; }
const double* hz_map_data(const hz_map* m) { return m ? m->map.data().data() : nullptr; }

hz_status hz_map_read_depth(const char* path, double depth_scale, hz_map** out) {
  HZ_REQUIRE(path != nullptr && out != nullptr, "null argument");
  *out = nullptr;
  return guard([&] {
    auto m = std::make_unique<hz_map>();
    m->map = hazeorder::read_depth(path, depth_scale);
    *out = m.release();
  });
}

hz_status hz_map_write_pfm(const hz_map* m, const char* path) {
  HZ_REQUIRE(m != nullptr && path != nullptr, "null argument");
  return guard([&] { hazeorder::write_pfm(path, m->map); });
}

hz_status hz_map_write_png(const hz_map* m, const char* path, int stretch) {
  HZ_REQUIRE(m != nullptr && path != nullptr, "null argument");
  return guard([&] {
    if (stretch) {
      hazeorder::write_map_png(path, m->map);
    } else {
      hazeorder::write_unit_map_png(path, m->map);
    }
  });
}

void hz_map_free(hz_map* m) { delete m; }

// Configuration ----------------------------------------------------------------

hz_status hz_config_create(hz_config** out) {
  HZ_REQUIRE(out != nullptr, "null output handle");
  *out = nullptr;
  return guard([&] { *out = new hz_config(); });
}

hz_status hz_config_set_patch_size(hz_config* cfg, int r) {
  HZ_REQUIRE(cfg != nullptr, "null config");
  if (r < 3 || r % 2 == 0) {
    return set_error(HZ_ERR_CONFIG, "patch size must be odd and >= 3");
  }
  cfg->cfg.r = r;
  return HZ_OK;
}

hz_status hz_config_set_epsilon(hz_config* cfg, double epsilon) {
  HZ_REQUIRE(cfg != nullptr, "null config");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    return set_error(HZ_ERR_CONFIG, "epsilon must lie in [0,1]");
  }
  cfg->cfg.epsilon = epsilon;
  return HZ_OK;
}

hz_status hz_config_set_weight_fn(hz_config* cfg, hz_weight_fn fn) {
  HZ_REQUIRE(cfg != nullptr, "null config");
  switch (fn) {
    case HZ_WEIGHT_PHI1: cfg->cfg.weight_fn = hazeorder::WeightFunction::kPhi1; break;
    case HZ_WEIGHT_PHI2: cfg->cfg.weight_fn = hazeorder::WeightFunction::kPhi2; break;
    case HZ_WEIGHT_PHI3: cfg->cfg.weight_fn = hazeorder::WeightFunction::kPhi3; break;
    default: return set_error(HZ_ERR_CONFIG, "unknown weight function");
  }
  return HZ_OK;
}

hz_status hz_config_set_weight_fn_name(hz_config* cfg, const char* name) {
  HZ_REQUIRE(cfg != nullptr && name != nullptr, "null argument");
  return guard([&] { cfg->cfg.weight_fn = hazeorder::parse_weight_function(name); });
}

hz_status hz_config_set_clahe(hz_config* cfg, int enabled) {
  HZ_REQUIRE(cfg != nullptr, "null config");
  cfg->cfg.apply_clahe = enabled != 0;
  return HZ_OK;
}

hz_status hz_config_set_clahe_params(hz_config* cfg, int tiles_x, int tiles_y,
                                     double clip) {
  HZ_REQUIRE(cfg != nullptr, "null config");
  if (tiles_x < 1 || tiles_y < 1 || !(clip > 0.0)) {
    return set_error(HZ_ERR_CONFIG, "CLAHE needs tiles >= 1 and clip > 0");
  }
  cfg->cfg.clahe = {tiles_x, tiles_y, clip};
  return HZ_OK;
}

hz_status hz_config_set_guided(hz_config* cfg, int window, double eps) {
  HZ_REQUIRE(cfg != nullptr, "null config");
  if (window < 1 || window % 2 == 0 || !(eps > 0.0)) {
    return set_error(HZ_ERR_CONFIG, "guided filter needs an odd window and eps > 0");
  }
  cfg->cfg.guided_radius = window;
  cfg->cfg.guided_eps = eps;
  return HZ_OK;
}

hz_status hz_config_set_t_floor(hz_config* cfg, double t_floor) {
  HZ_REQUIRE(cfg != nullptr, "null config");
  if (!(t_floor > 0.0 && t_floor < 1.0)) {
    return set_error(HZ_ERR_CONFIG, "t_floor must lie in (0,1)");
  }
  cfg->cfg.t_floor = t_floor;
  return HZ_OK;
}

hz_status hz_config_set_airlight(hz_config* cfg, const double* a, size_t n) {
  HZ_REQUIRE(cfg != nullptr && a != nullptr, "null argument");
  return guard([&] { cfg->cfg.airlight = hazeorder::AtmosphericLight(airlight_vector(a, n)); });
}

hz_status hz_config_clear_airlight(hz_config* cfg) {
  HZ_REQUIRE(cfg != nullptr, "null config");
  cfg->cfg.airlight.reset();
  return HZ_OK;
}

hz_status hz_config_set_theta_hat_scale(hz_config* cfg, double scale) {
  HZ_REQUIRE(cfg != nullptr, "null config");
  if (scale <= 0.0) {
    cfg->cfg.theta_hat_scale.reset();
    return HZ_OK;
  }
  if (scale < 1.0) {
    return set_error(HZ_ERR_CONFIG, "theta-hat scale must be >= 1");
  }
  cfg->cfg.theta_hat_scale = scale;
  return HZ_OK;
}

int hz_config_patch_size(const hz_config* cfg) { return cfg ? cfg->cfg.r : 0; }
double hz_config_epsilon(const hz_config* cfg) { return cfg ? cfg->cfg.epsilon : 0.0; }
const char* hz_config_weight_fn_name(const hz_config* cfg) {
  return cfg ? hazeorder::weight_function_name(cfg->cfg.weight_fn) : "";
}

hz_status hz_config_validate(const hz_config* cfg) {
  HZ_REQUIRE(cfg != nullptr, "null config");
  return guard([&] { cfg->cfg.validate(); });
}

void hz_config_free(hz_config* cfg) { delete cfg; }

// Pipeline ---------------------------------------------------------------------

hz_status hz_estimate_airlight(const hz_image* hazy, double* out, size_t n) {
  HZ_REQUIRE(hazy != nullptr && out != nullptr, "null argument");
  HZ_REQUIRE(n == static_cast<size_t>(hazy->img.channels()), "airlight buffer must hold one value per channel");
  return guard([&] {
    const auto a = hazeorder::estimate_airlight(hazy->img);
    for (size_t c = 0; c < n; ++c) out[c] = a[c];
  });
}

hz_status hz_dehaze(const hz_image* hazy, const hz_config* cfg, hz_image** out,
                    hz_trace** trace) {
  HZ_REQUIRE(hazy != nullptr && cfg != nullptr && out != nullptr, "null argument");
  *out = nullptr;
  if (trace) *trace = nullptr;
  return guard([&] {
    hazeorder::DehazeResult r = hazeorder::dehaze(hazy->img, cfg->cfg);
    auto img = std::make_unique<hz_image>();
    img->img = std::move(r.image);
    if (trace) {
      auto t = std::make_unique<hz_trace>();
      t->trace = std::move(r.trace);
      const hazeorder::ScalarMap* sources[] = {
          &t->trace.theta_haze, &t->trace.theta_r_haze, &t->trace.z,
          &t->trace.w,          &t->trace.t_boundary,   &t->trace.theta_r_clear,
          &t->trace.t_raw,      &t->trace.t_refined};
      for (const auto* src : sources) {
        if (src->empty()) {
          t->maps.push_back(nullptr);
        } else {
          t->maps.push_back(std::make_unique<hz_map>(hz_map{*src}));
        }
      }
      *trace = t.release();
    }
    *out = img.release();
  });
}

const hz_map* hz_trace_get_map(const hz_trace* trace, hz_trace_map which) {
  if (trace == nullptr) return nullptr;
  const auto idx = static_cast<size_t>(which);
  if (idx >= trace->maps.size()) return nullptr;
  return trace->maps[idx].get();
}

double hz_trace_theta_hat(const hz_trace* trace) {
  return trace ? trace->trace.theta_hat_clear : 0.0;
}

double hz_trace_theta_eps(const hz_trace* trace) {
  return trace ? trace->trace.theta_eps : 0.0;
}

double hz_trace_overflow_fraction(const hz_trace* trace, int per_pixel) {
  if (trace == nullptr) return 0.0;
  return per_pixel ? trace->trace.overflow.pixel_fraction
                   : trace->trace.overflow.sample_fraction;
}

hz_status hz_trace_airlight(const hz_trace* trace, double* out, size_t n) {
  HZ_REQUIRE(trace != nullptr && out != nullptr, "null argument");
  HZ_REQUIRE(n == trace->trace.airlight.size(), "airlight buffer size mismatch");
  for (size_t c = 0; c < n; ++c) out[c] = trace->trace.airlight[c];
  return HZ_OK;
}

void hz_trace_free(hz_trace* trace) { delete trace; }

hz_status hz_synthesize_haze(const hz_image* clear, const hz_map* depth,
                             double beta, const double* airlight, size_t n,
                             hz_image** hazy_out, hz_map** transmission_out) {
  HZ_REQUIRE(clear != nullptr && depth != nullptr && airlight != nullptr &&
                 hazy_out != nullptr,
             "null argument");
  *hazy_out = nullptr;
  if (transmission_out) *transmission_out = nullptr;
  return guard([&] {
    hazeorder::SynthParams p;
    p.beta = beta;
    p.airlight = hazeorder::AtmosphericLight(airlight_vector(airlight, n));
    p.depth = depth->map;
    auto img = std::make_unique<hz_image>();
    img->img = hazeorder::synthesize_haze(clear->img, p);
    if (transmission_out) {
      auto t = std::make_unique<hz_map>();
      t->map = hazeorder::transmission_from_depth(depth->map, beta);
      *transmission_out = t.release();
    }
    *hazy_out = img.release();
  });
}

// Metrics ----------------------------------------------------------------------

hz_status hz_psnr(const hz_image* a, const hz_image* b, double* out) {
  HZ_REQUIRE(a != nullptr && b != nullptr && out != nullptr, "null argument");
  return guard([&] { *out = hazeorder::psnr(a->img, b->img); });
}

hz_status hz_ssim(const hz_image* a, const hz_image* b, double* out) {
  HZ_REQUIRE(a != nullptr && b != nullptr && out != nullptr, "null argument");
  return guard([&] { *out = hazeorder::ssim(a->img, b->img); });
}

hz_status hz_ciede2000(const hz_image* a, const hz_image* b, double* out) {
  HZ_REQUIRE(a != nullptr && b != nullptr && out != nullptr, "null argument");
  return guard([&] { *out = hazeorder::ciede2000(a->img, b->img); });
}

// Analysis ---------------------------------------------------------------------

hz_analysis_options hz_analysis_options_default(void) {
  return hz_analysis_options{35, 0, nullptr, 0};
}

}  // extern "C"

namespace {

hazeorder::AnalysisOptions to_options(const hz_analysis_options* opts) {
  hazeorder::AnalysisOptions o;
  if (opts == nullptr) return o;
  o.r = opts->r;
  o.full_rank = opts->full_rank != 0;
  if (opts->airlight != nullptr) {
    o.airlight = hazeorder::AtmosphericLight(airlight_vector(opts->airlight, opts->airlight_len));
  }
  return o;
}

void fill_report(const hazeorder::DepthOrderReport& r, hz_depth_report* out) {
  out->rho = r.rho;
  out->patch_size = r.patch_size;
  out->n_pixels = r.n_pixels;
}

}  // namespace

extern "C" {

hz_status hz_analyze_depth(const hz_image* hazy, const hz_map* depth,
                           const hz_analysis_options* opts, hz_depth_report* out) {
  HZ_REQUIRE(hazy != nullptr && depth != nullptr && out != nullptr, "null argument");
  return guard([&] {
    fill_report(hazeorder::depth_order_correlation(hazy->img, depth->map, to_options(opts)), out);
  });
}

hz_status hz_analyze_clear(const hz_image* hazy, const hz_image* clear,
                           const hz_analysis_options* opts, hz_depth_report* out) {
  HZ_REQUIRE(hazy != nullptr && clear != nullptr && out != nullptr, "null argument");
  return guard([&] {
    fill_report(hazeorder::depth_order_correlation(hazy->img, clear->img, to_options(opts)), out);
  });
}

hz_status hz_row_profile(const hz_image* hazy, const hz_analysis_options* opts,
                         double* out, size_t n) {
  HZ_REQUIRE(hazy != nullptr && out != nullptr, "null argument");
  HZ_REQUIRE(n == static_cast<size_t>(hazy->img.height()), "profile buffer must hold one value per row");
  return guard([&] {
    const auto rep = hazeorder::depth_order_profile(hazy->img, to_options(opts));
    std::copy(rep.row_profile.begin(), rep.row_profile.end(), out);
  });
}

hz_status hz_spearman(const double* xs, const double* ys, size_t n, double* rho) {
  HZ_REQUIRE(xs != nullptr && ys != nullptr && rho != nullptr, "null argument");
  return guard([&] { *rho = hazeorder::spearman_rho({xs, n}, {ys, n}); });
}

}  // extern "C"
