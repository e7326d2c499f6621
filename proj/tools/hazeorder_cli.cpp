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

// Command-line front end. Talks to the library only through hazeorder.h.

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "hazeorder/hazeorder.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct ImageDeleter {
  void operator()(hz_image* p) const { hz_image_free(p); }
};
struct MapDeleter {
  void operator()(hz_map* p) const { hz_map_free(p); }
};
struct ConfigDeleter {
  void operator()(hz_config* p) const { hz_config_free(p); }
};
struct TraceDeleter {
  void operator()(hz_trace* p) const { hz_trace_free(p); }
};
using Image = std::unique_ptr<hz_image, ImageDeleter>;
using Map = std::unique_ptr<hz_map, MapDeleter>;
using Config = std::unique_ptr<hz_config, ConfigDeleter>;
using Trace = std::unique_ptr<hz_trace, TraceDeleter>;

class CallError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void check(hz_status s) {
  if (s != HZ_OK) throw CallError(hz_last_error());
}

Image load_image(const fs::path& p) {
  hz_image* raw = nullptr;
  check(hz_image_read(p.string().c_str(), &raw));
  return Image(raw);
}

std::string fmt(double v, const char* format = "%.6f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Appends rows to a CSV file, writing the header first if the file is new or
// empty.
void append_csv(const fs::path& path, const std::string& header,
                const std::vector<std::string>& rows) {
  const bool fresh = !fs::exists(path) || fs::file_size(path) == 0;
  std::ofstream out(path, std::ios::app);
  if (!out) throw CallError("cannot open " + path.string() + " for writing");
  if (fresh) out << header << "\n";
  for (const std::string& r : rows) out << r << "\n";
  if (!out) throw CallError("failed writing " + path.string());
}

std::vector<double> parse_airlight(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw CLI::ValidationError("--airlight", "expected R,G,B numbers, got '" + text + "'");
    }
  }
  if (v.size() != 1 && v.size() != 3) {
    throw CLI::ValidationError("--airlight", "expected one or three values");
  }
  for (double x : v) {
    if (!(x > 0.0 && x <= 1.0)) {
      throw CLI::ValidationError("--airlight", "values must lie in (0,1]");
    }
  }
  return v;
}

// Matches the airlight list to the image channel count.
std::vector<double> airlight_for(const std::vector<double>& a, int channels) {
  if (static_cast<int>(a.size()) == channels) return a;
  if (a.size() == 1) return std::vector<double>(channels, a[0]);
  if (channels == 1 && a[0] == a[1] && a[1] == a[2]) return {a[0]};
  throw CallError("airlight has " + std::to_string(a.size()) +
                  " values but the image has " + std::to_string(channels) + " channel(s)");
}

bool is_image_file(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
  return ext == ".png" || ext == ".ppm" || ext == ".pgm" || ext == ".pnm";
}

std::vector<fs::path> list_images(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && is_image_file(e.path())) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

unsigned thread_count(std::size_t jobs) {
  unsigned n = 0;
  if (const char* env = std::getenv("HAZEORDER_THREADS")) {
    try {
      n = static_cast<unsigned>(std::stoul(env));
    } catch (const std::exception&) {
      n = 0;
    }
  }
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

// dehaze ----------------------------------------------------------------------

struct DehazeOptions {
  std::string input;
  std::string output;
  int r = 35;
  double epsilon = 0.02;
  std::string weight_fn = "phi2";
  bool no_clahe = false;
  std::string airlight;
  std::string save_transmission;
  std::string save_theta;
  std::string trace;
  double theta_hat_scale = 0.0;
  std::string gt;
};

struct DehazeJob {
  fs::path input;
  fs::path output;
  fs::path transmission;
  fs::path theta;
  fs::path gt;
};

const char* kRunHeader =
    "input,output,wall_ms,r,epsilon,weight_fn,theta_hat_clear,overflow_fraction,"
    "psnr_db,ssim,ciede2000,status";

Config make_config(const DehazeOptions& o) {
  hz_config* raw = nullptr;
  check(hz_config_create(&raw));
  Config cfg(raw);
  check(hz_config_set_patch_size(cfg.get(), o.r));
  check(hz_config_set_epsilon(cfg.get(), o.epsilon));
  check(hz_config_set_weight_fn_name(cfg.get(), o.weight_fn.c_str()));
  check(hz_config_set_clahe(cfg.get(), o.no_clahe ? 0 : 1));
  if (o.theta_hat_scale > 0.0) check(hz_config_set_theta_hat_scale(cfg.get(), o.theta_hat_scale));
  check(hz_config_validate(cfg.get()));
  return cfg;
}

std::string run_dehaze(const DehazeJob& job, const DehazeOptions& o,
                       const std::optional<std::vector<double>>& airlight, bool& ok) {
  std::vector<std::string> f = {csv_field(job.input.string()), csv_field(job.output.string())};
  std::string metrics = ",,";
  std::string tail;
  ok = false;
  try {
    Config cfg = make_config(o);
    Image hazy = load_image(job.input);
    if (airlight) {
      const std::vector<double> a = airlight_for(*airlight, hz_image_channels(hazy.get()));
      check(hz_config_set_airlight(cfg.get(), a.data(), a.size()));
    }
    const auto t0 = std::chrono::steady_clock::now();
    hz_image* out_raw = nullptr;
    hz_trace* trace_raw = nullptr;
    check(hz_dehaze(hazy.get(), cfg.get(), &out_raw, &trace_raw));
    const auto t1 = std::chrono::steady_clock::now();
    Image out(out_raw);
    Trace trace(trace_raw);
    check(hz_image_write_png(out.get(), job.output.string().c_str()));
    if (!job.transmission.empty()) {
      check(hz_map_write_png(hz_trace_get_map(trace.get(), HZ_TRACE_T_REFINED),
                             job.transmission.string().c_str(), 1));
    }
    if (!job.theta.empty()) {
      check(hz_map_write_png(hz_trace_get_map(trace.get(), HZ_TRACE_THETA_R_HAZE),
                             job.theta.string().c_str(), 1));
    }
    if (!job.gt.empty()) {
      Image gt = load_image(job.gt);
      double p = 0, s = 0, d = 0;
      check(hz_psnr(out.get(), gt.get(), &p));
      check(hz_ssim(out.get(), gt.get(), &s));
      metrics = fmt(p) + "," + fmt(s) + ",";
      if (hz_image_channels(gt.get()) == 3) {
        check(hz_ciede2000(out.get(), gt.get(), &d));
        metrics += fmt(d);
      }
    }
    const double ms = std::max(1e-3, std::chrono::duration<double, std::milli>(t1 - t0).count());
    f.push_back(fmt(ms, "%.3f"));
    f.push_back(std::to_string(hz_config_patch_size(cfg.get())));
    f.push_back(fmt(hz_config_epsilon(cfg.get()), "%g"));
    f.push_back(hz_config_weight_fn_name(cfg.get()));
    f.push_back(fmt(hz_trace_theta_hat(trace.get()), "%.9g"));
    f.push_back(fmt(hz_trace_overflow_fraction(trace.get(), 1), "%.6f"));
    tail = "ok";
    ok = true;
  } catch (const std::exception& e) {
    f.resize(2);
    for (int i = 0; i < 6; ++i) f.push_back("");
    metrics = ",,";
    tail = csv_field(std::string("error: ") + e.what());
  }
  std::string row;
  for (const std::string& s : f) row += s + ",";
  return row + metrics + "," + tail;
}

int cmd_dehaze(const DehazeOptions& o) {
  std::optional<std::vector<double>> airlight;
  if (!o.airlight.empty()) airlight = parse_airlight(o.airlight);
  // Surface configuration mistakes once, before any file is touched.
  try {
    make_config(o);
  } catch (const CallError& err) {
    throw CLI::ValidationError("dehaze", err.what());
  }

  std::vector<DehazeJob> jobs;
  const fs::path in(o.input);
  if (fs::is_directory(in)) {
    const fs::path out_dir(o.output);
    fs::create_directories(out_dir);
    if (!o.save_transmission.empty()) fs::create_directories(o.save_transmission);
    if (!o.save_theta.empty()) fs::create_directories(o.save_theta);
    for (const fs::path& p : list_images(in)) {
      DehazeJob j;
      j.input = p;
      j.output = out_dir / (p.stem().string() + ".png");
      if (!o.save_transmission.empty()) j.transmission = fs::path(o.save_transmission) / (p.stem().string() + ".png");
      if (!o.save_theta.empty()) j.theta = fs::path(o.save_theta) / (p.stem().string() + ".png");
      if (!o.gt.empty()) {
        const fs::path g = fs::path(o.gt) / p.filename();
        if (fs::exists(g)) j.gt = g;
      }
      jobs.push_back(j);
    }
    if (jobs.empty()) {
      std::cerr << "hazeorder: no images found in " << in << "\n";
      return kExitRuntime;
    }
  } else {
    jobs.push_back({in, o.output, o.save_transmission, o.save_theta, o.gt});
  }

  std::vector<std::string> rows(jobs.size());
  std::vector<char> ok(jobs.size(), 0);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      bool good = false;
      rows[i] = run_dehaze(jobs[i], o, airlight, good);
      ok[i] = good;
    }
  };
  const unsigned n_threads = thread_count(jobs.size());
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  std::cout << kRunHeader << "\n";
  for (const std::string& r : rows) std::cout << r << "\n";
  if (!o.trace.empty()) append_csv(o.trace, kRunHeader, rows);

  std::size_t failed = 0;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (!ok[i]) {
      ++failed;
      std::cerr << "hazeorder: failed on " << jobs[i].input.string() << "\n";
    }
  }
  return failed == 0 ? kExitOk : kExitRuntime;
}

// synth -----------------------------------------------------------------------

struct SynthOptions {
  std::string clear;
  std::string depth;
  double beta = 1.0;
  std::string airlight = "1,1,1";
  std::string output;
  std::string save_t;
  double depth_scale = 10.0;
};

int cmd_synth(const SynthOptions& o) {
  const std::vector<double> a_list = parse_airlight(o.airlight);
  if (!(o.beta > 0.0)) throw CLI::ValidationError("--beta", "must be > 0");
  if (!(o.depth_scale > 0.0)) throw CLI::ValidationError("--depth-scale", "must be > 0");
  Image clear = load_image(o.clear);
  hz_map* depth_raw = nullptr;
  check(hz_map_read_depth(o.depth.c_str(), o.depth_scale, &depth_raw));
  Map depth(depth_raw);
  const std::vector<double> a = airlight_for(a_list, hz_image_channels(clear.get()));
  hz_image* hazy_raw = nullptr;
  hz_map* t_raw = nullptr;
  check(hz_synthesize_haze(clear.get(), depth.get(), o.beta, a.data(), a.size(), &hazy_raw,
                           o.save_t.empty() ? nullptr : &t_raw));
  Image hazy(hazy_raw);
  Map t(t_raw);
  check(hz_image_write_png(hazy.get(), o.output.c_str()));
  if (t) check(hz_map_write_png(t.get(), o.save_t.c_str(), 0));
  return kExitOk;
}

// eval ------------------------------------------------------------------------

struct EvalOptions {
  std::string restored;
  std::string truth;
  std::string metrics = "psnr,ssim,ciede2000";
  std::string csv;
};

const char* kEvalHeader = "image,psnr_db,ssim,ciede2000";

int cmd_eval(const EvalOptions& o) {
  std::set<std::string> wanted;
  {
    std::stringstream ss(o.metrics);
    std::string m;
    while (std::getline(ss, m, ',')) {
      if (m != "psnr" && m != "ssim" && m != "ciede2000") {
        throw CLI::ValidationError("--metrics", "unknown metric '" + m + "'");
      }
      wanted.insert(m);
    }
    if (wanted.empty()) throw CLI::ValidationError("--metrics", "no metric selected");
  }

  std::vector<std::pair<fs::path, fs::path>> pairs;
  std::size_t skipped = 0;
  if (fs::is_directory(o.restored) && fs::is_directory(o.truth)) {
    std::map<std::string, fs::path> truth;
    for (const fs::path& p : list_images(o.truth)) truth[p.filename().string()] = p;
    std::set<std::string> used;
    for (const fs::path& p : list_images(o.restored)) {
      auto it = truth.find(p.filename().string());
      if (it == truth.end()) {
        std::cerr << "warning: no ground truth for " << p.filename().string() << ", skipped\n";
        ++skipped;
        continue;
      }
      used.insert(it->first);
      pairs.emplace_back(p, it->second);
    }
    for (const auto& [name, p] : truth) {
      if (!used.count(name)) {
        std::cerr << "warning: no restored image for " << name << ", skipped\n";
        ++skipped;
      }
    }
    if (pairs.empty()) {
      std::cerr << "hazeorder: no matching image pairs\n";
      return kExitRuntime;
    }
  } else if (fs::is_directory(o.restored) || fs::is_directory(o.truth)) {
    throw CLI::ValidationError("eval", "give two files or two directories");
  } else {
    pairs.emplace_back(o.restored, o.truth);
  }

  std::vector<std::string> rows;
  for (const auto& [restored_path, truth_path] : pairs) {
    Image a = load_image(restored_path);
    Image b = load_image(truth_path);
    std::string row = csv_field(restored_path.filename().string());
    double v = 0.0;
    row += ",";
    if (wanted.count("psnr")) {
      check(hz_psnr(a.get(), b.get(), &v));
      row += fmt(v);
    }
    row += ",";
    if (wanted.count("ssim")) {
      check(hz_ssim(a.get(), b.get(), &v));
      row += fmt(v);
    }
    row += ",";
    if (wanted.count("ciede2000") && hz_image_channels(a.get()) == 3) {
      check(hz_ciede2000(a.get(), b.get(), &v));
      row += fmt(v);
    }
    rows.push_back(row);
  }
  std::cout << kEvalHeader << "\n";
  for (const std::string& r : rows) std::cout << r << "\n";
  if (!o.csv.empty()) append_csv(o.csv, kEvalHeader, rows);
  return kExitOk;
}

// analyze ---------------------------------------------------------------------

struct AnalyzeOptions {
  std::string hazy;
  std::string gt_depth;
  std::string gt_clear;
  int r = 35;
  std::string profile;
  bool rho_only = false;
  bool full_rank = false;
  double depth_scale = 10.0;
  std::string report;
};

const char* kAnalyzeHeader = "image_id,r,rho,n_pixels";

int cmd_analyze(const AnalyzeOptions& o) {
  const bool has_gt = !o.gt_depth.empty() || !o.gt_clear.empty();
  if (o.rho_only && !has_gt) {
    throw CLI::ValidationError("--rho", "needs --gt-depth or --gt-clear");
  }
  if (o.r < 3 || o.r % 2 == 0) throw CLI::ValidationError("--r", "must be odd and >= 3");
  if (!(o.depth_scale > 0.0)) throw CLI::ValidationError("--depth-scale", "must be > 0");
  Image hazy = load_image(o.hazy);
  hz_analysis_options opts = hz_analysis_options_default();
  opts.r = o.r;
  opts.full_rank = o.full_rank ? 1 : 0;

  const int height = hz_image_height(hazy.get());
  std::vector<double> profile(static_cast<std::size_t>(height));
  check(hz_row_profile(hazy.get(), &opts, profile.data(), profile.size()));
  std::ostringstream prof;
  prof << "row_index,mean_theta_r\n";
  for (int i = 0; i < height; ++i) prof << i << "," << fmt(profile[i], "%.9g") << "\n";
  if (!o.profile.empty()) {
    std::ofstream out(o.profile);
    out << prof.str();
    if (!out) throw CallError("failed writing " + o.profile);
  }
  if (!has_gt) {
    if (o.profile.empty()) std::cout << prof.str();
    return kExitOk;
  }

  hz_depth_report rep{};
  if (!o.gt_depth.empty()) {
    hz_map* raw = nullptr;
    check(hz_map_read_depth(o.gt_depth.c_str(), o.depth_scale, &raw));
    Map depth(raw);
    check(hz_analyze_depth(hazy.get(), depth.get(), &opts, &rep));
  } else {
    Image clear = load_image(o.gt_clear);
    check(hz_analyze_clear(hazy.get(), clear.get(), &opts, &rep));
  }
  const std::string row = csv_field(fs::path(o.hazy).stem().string()) + "," +
                          std::to_string(rep.patch_size) + "," + fmt(rep.rho, "%.6f") + "," +
                          std::to_string(rep.n_pixels);
  if (o.rho_only) {
    std::cout << fmt(rep.rho, "%.6f") << "\n";
  } else {
    std::cout << kAnalyzeHeader << "\n" << row << "\n";
  }
  if (!o.report.empty()) append_csv(o.report, kAnalyzeHeader, {row});
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-image dehazing guided by depth order"};
  app.set_version_flag("--version", hz_version());
  app.require_subcommand(1);

  DehazeOptions d;
  auto* dehaze = app.add_subcommand("dehaze", "Dehaze an image or every image in a directory");
  dehaze->add_option("input", d.input, "Hazy image (PNG/PPM/PGM) or directory")->required();
  dehaze->add_option("-o,--output", d.output, "Output PNG, or directory in batch mode")->required();
  dehaze->add_option("--r", d.r, "Patch size (odd, >= 3)")->capture_default_str();
  dehaze->add_option("--epsilon", d.epsilon, "Fraction of pixels allowed to reach the boundary")
      ->capture_default_str();
  dehaze->add_option("--weight-fn", d.weight_fn, "Weight function")
      ->check(CLI::IsMember({"phi1", "phi2", "phi3"}))
      ->capture_default_str();
  dehaze->add_flag("--no-clahe", d.no_clahe, "Skip the final contrast equalization");
  dehaze->add_option("--airlight", d.airlight, "Override airlight, R,G,B in (0,1]");
  dehaze->add_option("--save-transmission", d.save_transmission, "Write refined transmission PNG");
  dehaze->add_option("--save-theta", d.save_theta, "Write stretched depth-order map PNG");
  dehaze->add_option("--trace", d.trace, "Append run report rows to this CSV");
  dehaze->add_option("--theta-hat-scale", d.theta_hat_scale,
                     "Use S x max(theta_r) as the global parameter (S >= 1)");
  dehaze->add_option("--gt", d.gt, "Ground-truth image (or directory) for report metrics");

  SynthOptions s;
  auto* synth = app.add_subcommand("synth", "Synthesize a hazy image from a clear image and depth");
  synth->add_option("clear", s.clear, "Clear image")->required();
  synth->add_option("--depth", s.depth, "Depth map: 16-bit PNG or PFM")->required();
  synth->add_option("--beta", s.beta, "Scattering coefficient (> 0)")->capture_default_str();
  synth->add_option("--airlight", s.airlight, "Airlight R,G,B in (0,1]")->capture_default_str();
  synth->add_option("-o,--output", s.output, "Hazy PNG")->required();
  synth->add_option("--save-t", s.save_t, "Write the true transmission as PNG");
  synth->add_option("--depth-scale", s.depth_scale, "Depth units at 16-bit full scale")
      ->capture_default_str();

  EvalOptions e;
  auto* eval = app.add_subcommand("eval", "Compare restored images against ground truth");
  eval->add_option("restored", e.restored, "Restored image or directory")->required();
  eval->add_option("ground_truth", e.truth, "Ground-truth image or directory")->required();
  eval->add_option("--metrics", e.metrics, "Comma-separated subset of psnr,ssim,ciede2000")
      ->capture_default_str();
  eval->add_option("--csv", e.csv, "Append metric rows to this CSV");

  AnalyzeOptions a;
  auto* analyze = app.add_subcommand("analyze", "Measure how well theta_r tracks depth order");
  analyze->add_option("hazy", a.hazy, "Hazy image")->required();
  auto* gd = analyze->add_option("--gt-depth", a.gt_depth, "Ground-truth depth: 16-bit PNG or PFM");
  auto* gc = analyze->add_option("--gt-clear", a.gt_clear, "Ground-truth clear image");
  gd->excludes(gc);
  analyze->add_option("--r", a.r, "Patch size (odd, >= 3)")->capture_default_str();
  analyze->add_option("--profile", a.profile, "Write row profile CSV (bottom row first)");
  analyze->add_flag("--rho", a.rho_only, "Print only the correlation coefficient");
  analyze->add_flag("--full-rank", a.full_rank, "Rank every pixel instead of a strided sample");
  analyze->add_option("--depth-scale", a.depth_scale, "Depth units at 16-bit full scale")
      ->capture_default_str();
  analyze->add_option("--report", a.report, "Append the report row to this CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::CallForVersion& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kExitUsage;
  }

  try {
    if (*dehaze) return cmd_dehaze(d);
    if (*synth) return cmd_synth(s);
    if (*eval) return cmd_eval(e);
    if (*analyze) return cmd_analyze(a);
  } catch (const CLI::ValidationError& err) {
    std::cerr << "hazeorder: " << err.what() << "\n";
    return kExitUsage;
  } catch (const CallError& err) {
    std::cerr << "hazeorder: " << err.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& err) {
    std::cerr << "hazeorder: " << err.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
