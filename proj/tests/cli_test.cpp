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

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "hazeorder/io.hpp"
#include "hazeorder/metrics.hpp"
#include "scene.hpp"

namespace hazeorder {
namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code = -1;
  std::string out;
};

// Runs the CLI through the shell; stderr is discarded.
RunResult run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " \"" + HAZEORDER_CLI_PATH + "\" " + args + " 2>/dev/null";
  RunResult r;
  FILE* p = popen(cmd.c_str(), "r");
  if (p == nullptr) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) out.push_back(f);
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = fs::temp_directory_path() / ("hazeorder_cli_" + std::to_string(getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_ / "hazy");
    fs::create_directories(dir_ / "clear");
    for (int k = 0; k < 3; ++k) {
      const testing::Scene s = testing::make_scene(300 + k);
      const std::string name = "img" + std::to_string(k) + ".png";
      write_png(dir_ / "hazy" / name, s.hazy);
      write_png(dir_ / "clear" / name, s.clear);
      if (k == 0) {
        write_pfm(dir_ / "depth.pfm", s.depth);
        write_png(dir_ / "hazy0.png", s.hazy);
        write_png(dir_ / "clear0.png", s.clear);
      }
    }
  }
  static void TearDownTestSuite() { fs::remove_all(dir_); }

  static fs::path dir_;
};

fs::path CliTest::dir_;

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(run("").exit_code, 2);
  EXPECT_EQ(run("frobnicate").exit_code, 2);
  EXPECT_EQ(run("dehaze " + q(dir_ / "hazy0.png")).exit_code, 2);  // missing -o
  EXPECT_EQ(run("dehaze " + q(dir_ / "hazy0.png") + " -o " + q(dir_ / "x.png") + " --r 4").exit_code, 2);
  EXPECT_EQ(run("dehaze " + q(dir_ / "hazy0.png") + " -o " + q(dir_ / "x.png") + " --weight-fn phi7").exit_code,
            2);
  EXPECT_EQ(run("synth " + q(dir_ / "clear0.png") + " --depth " + q(dir_ / "depth.pfm") +
                " --beta 0 -o " + q(dir_ / "s.png"))
                .exit_code,
            2);
  EXPECT_EQ(run("analyze " + q(dir_ / "hazy0.png") + " --gt-depth " + q(dir_ / "depth.pfm") +
                " --gt-clear " + q(dir_ / "clear0.png"))
                .exit_code,
            2);
  EXPECT_EQ(run("analyze " + q(dir_ / "hazy0.png") + " --rho").exit_code, 2);
}

TEST_F(CliTest, RuntimeErrorsExitOne) {
  const RunResult r = run("dehaze " + q(dir_ / "missing.png") + " -o " + q(dir_ / "x.png"));
  EXPECT_EQ(r.exit_code, 1);
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_NE(fields(rows[1]).back().find("error"), std::string::npos);
  EXPECT_EQ(run("eval " + q(dir_ / "missing.png") + " " + q(dir_ / "clear0.png")).exit_code, 1);
}

TEST_F(CliTest, DehazeWritesOutputAndMetrics) {
  const fs::path out = dir_ / "single_out.png";
  const fs::path trace = dir_ / "trace.csv";
  fs::remove(trace);
  const RunResult r = run("dehaze " + q(dir_ / "hazy0.png") + " -o " + q(out) + " --gt " +
                          q(dir_ / "clear0.png") + " --save-transmission " + q(dir_ / "t.png") +
                          " --trace " + q(trace));
  ASSERT_EQ(r.exit_code, 0);
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0],
            "input,output,wall_ms,r,epsilon,weight_fn,theta_hat_clear,overflow_fraction,psnr_db,ssim,"
            "ciede2000,status");
  const auto f = fields(rows[1]);
  ASSERT_EQ(f.size(), 12u);
  EXPECT_EQ(f[3], "35");
  EXPECT_EQ(f[5], "phi2");
  EXPECT_EQ(f[11], "ok");
  const double before = psnr(read_image(dir_ / "hazy0.png"), read_image(dir_ / "clear0.png"));
  EXPECT_GT(std::stod(f[8]), before);
  EXPECT_TRUE(fs::exists(out));
  EXPECT_TRUE(fs::exists(dir_ / "t.png"));
  EXPECT_EQ(lines(slurp(trace)).size(), 2u);

  // Appending reuses the existing header.
  ASSERT_EQ(run("dehaze " + q(dir_ / "hazy0.png") + " -o " + q(out) + " --trace " + q(trace)).exit_code, 0);
  EXPECT_EQ(lines(slurp(trace)).size(), 3u);
}

TEST_F(CliTest, DehazeIsDeterministic) {
  const fs::path a = dir_ / "det_a.png";
  const fs::path b = dir_ / "det_b.png";
  ASSERT_EQ(run("dehaze " + q(dir_ / "hazy0.png") + " -o " + q(a)).exit_code, 0);
  ASSERT_EQ(run("dehaze " + q(dir_ / "hazy0.png") + " -o " + q(b)).exit_code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
}

TEST_F(CliTest, BatchContinuesPastBadFiles) {
  const fs::path in = dir_ / "batch_in";
  fs::create_directories(in);
  for (const auto& e : fs::directory_iterator(dir_ / "hazy")) fs::copy_file(e.path(), in / e.path().filename());
  std::ofstream(in / "broken.png") << "not a png";
  const fs::path out = dir_ / "batch_out";
  const RunResult r = run("dehaze " + q(in) + " -o " + q(out) + " --gt " + q(dir_ / "clear"));
  EXPECT_EQ(r.exit_code, 1);
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 5u);
  int ok = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = fields(rows[i]);
    if (f.back() == "ok") {
      ++ok;
      EXPECT_FALSE(f[8].empty());
    } else {
      EXPECT_NE(rows[i].find(",\"error: "), std::string::npos);
      EXPECT_NE(rows[i].find("broken.png"), std::string::npos);
    }
  }
  EXPECT_EQ(ok, 3);
  for (int k = 0; k < 3; ++k) EXPECT_TRUE(fs::exists(out / ("img" + std::to_string(k) + ".png")));

  // Thread count does not change the output bytes.
  const fs::path serial = dir_ / "batch_serial";
  ASSERT_EQ(run("dehaze " + q(dir_ / "hazy") + " -o " + q(serial), "HAZEORDER_THREADS=1").exit_code, 0);
  const RunResult par = run("dehaze " + q(dir_ / "hazy") + " -o " + q(dir_ / "batch_par"), "HAZEORDER_THREADS=3");
  ASSERT_EQ(par.exit_code, 0);
  for (int k = 0; k < 3; ++k) {
    const std::string name = "img" + std::to_string(k) + ".png";
    EXPECT_EQ(slurp(serial / name), slurp(dir_ / "batch_par" / name));
    EXPECT_EQ(slurp(serial / name), slurp(out / name));
  }
}

TEST_F(CliTest, EvalSingleAndDirectory) {
  const RunResult single = run("eval " + q(dir_ / "clear0.png") + " " + q(dir_ / "clear0.png"));
  ASSERT_EQ(single.exit_code, 0);
  auto rows = lines(single.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], "image,psnr_db,ssim,ciede2000");
  auto f = fields(rows[1]);
  ASSERT_EQ(f.size(), 4u);
  EXPECT_DOUBLE_EQ(std::stod(f[1]), 99.0);
  EXPECT_DOUBLE_EQ(std::stod(f[2]), 1.0);
  EXPECT_DOUBLE_EQ(std::stod(f[3]), 0.0);

  const fs::path csv = dir_ / "eval.csv";
  const RunResult dir = run("eval " + q(dir_ / "hazy") + " " + q(dir_ / "clear") + " --csv " + q(csv));
  ASSERT_EQ(dir.exit_code, 0);
  rows = lines(slurp(csv));
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0], "image,psnr_db,ssim,ciede2000");

  const RunResult some = run("eval " + q(dir_ / "hazy0.png") + " " + q(dir_ / "clear0.png") + " --metrics psnr");
  ASSERT_EQ(some.exit_code, 0);
  f = fields(lines(some.out)[1] + ",");
  EXPECT_FALSE(f[1].empty());
  EXPECT_TRUE(f[2].empty());
}

TEST_F(CliTest, AnalyzeReportsRhoAndProfile) {
  const RunResult ident = run("analyze " + q(dir_ / "hazy0.png") + " --gt-clear " + q(dir_ / "hazy0.png") + " --rho");
  ASSERT_EQ(ident.exit_code, 0);
  EXPECT_DOUBLE_EQ(std::stod(ident.out), 1.0);

  const RunResult depth = run("analyze " + q(dir_ / "hazy0.png") + " --gt-depth " + q(dir_ / "depth.pfm") + " --rho");
  ASSERT_EQ(depth.exit_code, 0);
  EXPECT_GT(std::stod(depth.out), 0.8);

  const fs::path prof = dir_ / "profile.csv";
  ASSERT_EQ(run("analyze " + q(dir_ / "hazy0.png") + " --profile " + q(prof)).exit_code, 0);
  const auto rows = lines(slurp(prof));
  ASSERT_EQ(rows.size(), 1u + 160u);
  EXPECT_EQ(rows[0], "row_index,mean_theta_r");
  EXPECT_EQ(fields(rows[1])[0], "0");
}

TEST_F(CliTest, SynthPsnrFallsWithBeta) {
  const PlanarImage clear = read_image(dir_ / "clear0.png");
  double last = 1e9;
  for (const char* beta : {"0.5", "1", "2"}) {
    const fs::path out = dir_ / (std::string("synth_") + beta + ".png");
    ASSERT_EQ(run("synth " + q(dir_ / "clear0.png") + " --depth " + q(dir_ / "depth.pfm") + " --beta " + beta +
                  " -o " + q(out))
                  .exit_code,
              0);
    const double p = psnr(read_image(out), clear);
    EXPECT_LT(p, last) << beta;
    last = p;
  }
}

}  // namespace
}  // namespace hazeorder
