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

/* C interface to the hazeorder library.
 *
 * Objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns hz_status; on failure
 * hz_last_error() describes the problem for the calling thread. Pointers
 * returned by accessors are borrowed and stay valid until the owning handle
 * is freed. All functions are safe to call concurrently on distinct handles.
 */
#ifndef HAZEORDER_H_
#define HAZEORDER_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(HZ_BUILDING_LIBRARY)
#    define HZ_API __declspec(dllexport)
#  else
#    define HZ_API __declspec(dllimport)
#  endif
#elif defined(__GNUC__)
#  define HZ_API __attribute__((visibility("default")))
#else
#  define HZ_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hz_status {
  HZ_OK = 0,
  HZ_ERR_CONFIG = 1,
  HZ_ERR_STRUCTURAL = 2,
  HZ_ERR_IO = 3,
  HZ_ERR_VALIDATION = 4,
  HZ_ERR_UNSUPPORTED = 5,
  HZ_ERR_INVALID_ARGUMENT = 6, /* null handle, null output, short buffer */
  HZ_ERR_INTERNAL = 7
} hz_status;

typedef enum hz_weight_fn {
  HZ_WEIGHT_PHI1 = 1, /* z (2 - z) */
  HZ_WEIGHT_PHI2 = 2, /* z */
  HZ_WEIGHT_PHI3 = 3  /* z^2 */
} hz_weight_fn;

typedef enum hz_trace_map {
  HZ_TRACE_THETA_HAZE = 0,
  HZ_TRACE_THETA_R_HAZE = 1,
  HZ_TRACE_Z = 2,
  HZ_TRACE_W = 3,
  HZ_TRACE_T_BOUNDARY = 4, /* absent when a theta-hat scale is configured */
  HZ_TRACE_THETA_R_CLEAR = 5,
  HZ_TRACE_T_RAW = 6,
  HZ_TRACE_T_REFINED = 7
} hz_trace_map;

typedef struct hz_image hz_image;   /* H x W x C samples in [0,1] */
typedef struct hz_map hz_map;       /* H x W doubles */
typedef struct hz_config hz_config; /* dehaze parameters */
typedef struct hz_trace hz_trace;   /* intermediate maps of one dehaze run */

HZ_API const char* hz_version(void);
HZ_API const char* hz_status_string(hz_status status);
HZ_API const char* hz_last_error(void);

/* Images ------------------------------------------------------------------ */

HZ_API hz_status hz_image_from_bytes(const uint8_t* interleaved, size_t len,
                                     int width, int height, int channels,
                                     hz_image** out);
HZ_API hz_status hz_image_from_samples(const double* planar, size_t len,
                                       int width, int height, int channels,
                                       hz_image** out);
HZ_API hz_status hz_image_to_bytes(const hz_image* img, uint8_t* interleaved,
                                   size_t len);
HZ_API int hz_image_width(const hz_image* img);
HZ_API int hz_image_height(const hz_image* img);
HZ_API int hz_image_channels(const hz_image* img);
HZ_API const double* hz_image_samples(const hz_image* img);
/* PNG, P5 or P6. */
HZ_API hz_status hz_image_read(const char* path, hz_image** out);
HZ_API hz_status hz_image_write_png(const hz_image* img, const char* path);
HZ_API hz_status hz_image_write_pnm(const hz_image* img, const char* path);
HZ_API void hz_image_free(hz_image* img);

/* Maps -------------------------------------------------------------------- */

HZ_API hz_status hz_map_create(int width, int height, const double* data,
                               hz_map** out);
HZ_API int hz_map_width(const hz_map* m);
HZ_API int hz_map_height(const hz_map* m);
HZ_API const double* hz_map_data(const hz_map* m);
/* 16-bit grayscale PNG (raw / 65535 * depth_scale) or grayscale PFM. */
HZ_API hz_status hz_map_read_depth(const char* path, double depth_scale,
                                   hz_map** out);
HZ_API hz_status hz_map_write_pfm(const hz_map* m, const char* path);
/* stretch != 0: linear min-max stretch to 8 bits; otherwise values are taken
 * to lie in [0,1]. */
HZ_API hz_status hz_map_write_png(const hz_map* m, const char* path,
                                  int stretch);
HZ_API void hz_map_free(hz_map* m);

/* Configuration ----------------------------------------------------------- */

HZ_API hz_status hz_config_create(hz_config** out);
HZ_API hz_status hz_config_set_patch_size(hz_config* cfg, int r);
HZ_API hz_status hz_config_set_epsilon(hz_config* cfg, double epsilon);
HZ_API hz_status hz_config_set_weight_fn(hz_config* cfg, hz_weight_fn fn);
HZ_API hz_status hz_config_set_weight_fn_name(hz_config* cfg, const char* name);
HZ_API hz_status hz_config_set_clahe(hz_config* cfg, int enabled);
HZ_API hz_status hz_config_set_clahe_params(hz_config* cfg, int tiles_x,
                                            int tiles_y, double clip);
HZ_API hz_status hz_config_set_guided(hz_config* cfg, int window, double eps);
HZ_API hz_status hz_config_set_t_floor(hz_config* cfg, double t_floor);
/* n must equal the channel count of the images processed later. */
HZ_API hz_status hz_config_set_airlight(hz_config* cfg, const double* a,
                                        size_t n);
HZ_API hz_status hz_config_clear_airlight(hz_config* cfg);
/* scale <= 0 restores the boundary-constrained optimization. */
HZ_API hz_status hz_config_set_theta_hat_scale(hz_config* cfg, double scale);
HZ_API int hz_config_patch_size(const hz_config* cfg);
HZ_API double hz_config_epsilon(const hz_config* cfg);
HZ_API const char* hz_config_weight_fn_name(const hz_config* cfg);
HZ_API hz_status hz_config_validate(const hz_config* cfg);
HZ_API void hz_config_free(hz_config* cfg);

/* Pipeline ---------------------------------------------------------------- */

HZ_API hz_status hz_estimate_airlight(const hz_image* hazy, double* out,
                                      size_t n);
/* trace may be NULL. */
HZ_API hz_status hz_dehaze(const hz_image* hazy, const hz_config* cfg,
                           hz_image** out, hz_trace** trace);
/* Borrowed; NULL when the map was not produced. */
HZ_API const hz_map* hz_trace_get_map(const hz_trace* trace, hz_trace_map which);
HZ_API double hz_trace_theta_hat(const hz_trace* trace);
HZ_API double hz_trace_theta_eps(const hz_trace* trace);
/* Fraction of recovered pixels (per_pixel != 0) or samples outside [0,1]
 * before clamping. */
HZ_API double hz_trace_overflow_fraction(const hz_trace* trace, int per_pixel);
HZ_API hz_status hz_trace_airlight(const hz_trace* trace, double* out, size_t n);
HZ_API void hz_trace_free(hz_trace* trace);

/* transmission_out may be NULL. */
HZ_API hz_status hz_synthesize_haze(const hz_image* clear, const hz_map* depth,
                                    double beta, const double* airlight,
                                    size_t n, hz_image** hazy_out,
                                    hz_map** transmission_out);

/* Metrics ----------------------------------------------------------------- */

HZ_API hz_status hz_psnr(const hz_image* a, const hz_image* b, double* out);
HZ_API hz_status hz_ssim(const hz_image* a, const hz_image* b, double* out);
HZ_API hz_status hz_ciede2000(const hz_image* a, const hz_image* b, double* out);

/* Depth-order analysis ---------------------------------------------------- */

typedef struct hz_analysis_options {
  int r;                  /* patch size, odd >= 3 */
  int full_rank;          /* nonzero disables subsampling */
  const double* airlight; /* optional override, NULL to estimate */
  size_t airlight_len;
} hz_analysis_options;

typedef struct hz_depth_report {
  double rho;
  int patch_size;
  size_t n_pixels;
} hz_depth_report;

HZ_API hz_analysis_options hz_analysis_options_default(void);
HZ_API hz_status hz_analyze_depth(const hz_image* hazy, const hz_map* depth,
                                  const hz_analysis_options* opts,
                                  hz_depth_report* out);
HZ_API hz_status hz_analyze_clear(const hz_image* hazy, const hz_image* clear,
                                  const hz_analysis_options* opts,
                                  hz_depth_report* out);
/* n must equal the image height; out[0] is the bottom row. */
HZ_API hz_status hz_row_profile(const hz_image* hazy,
                                const hz_analysis_options* opts, double* out,
                                size_t n);
HZ_API hz_status hz_spearman(const double* xs, const double* ys, size_t n,
                             double* rho);

#ifdef __cplusplus
}
#endif

#endif /* HAZEORDER_H_ */
