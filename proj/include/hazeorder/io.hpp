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

#ifndef HAZEORDER_IO_HPP_
#define HAZEORDER_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "hazeorder/image.hpp"

namespace hazeorder {

inline constexpr double kDefaultDepthScale = 10.0;

// PNG (8-bit gray or RGB, alpha dropped, palettes expanded) or binary
// PGM/PPM (P5/P6, maxval 255). Format is detected from the file signature.
PlanarImage read_image(const std::filesystem::path& path);
PlanarImage decode_image(std::span<const std::uint8_t> bytes);

void write_png(const std::filesystem::path& path, const PlanarImage& img);
void write_pnm(const std::filesystem::path& path, const PlanarImage& img);
std::vector<std::uint8_t> encode_png(const PlanarImage& img);

// Raw 8-bit PNG writer; channels 1-4, interleaved.
void write_png_bytes(const std::filesystem::path& path, int width, int height,
                     int channels, std::span<const std::uint8_t> interleaved);
// 16-bit grayscale PNG writer, row-major.
void write_png16(const std::filesystem::path& path, int width, int height,
                 std::span<const std::uint16_t> samples);

// Depth map from a 16-bit grayscale PNG (raw / 65535 * depth_scale) or a
// grayscale PFM (values as stored). Negative or non-finite depth is rejected.
ScalarMap read_depth(const std::filesystem::path& path,
                     double depth_scale = kDefaultDepthScale);

ScalarMap read_pfm(const std::filesystem::path& path);
// Little-endian grayscale PFM, bottom row first as the format requires.
void write_pfm(const std::filesystem::path& path, const ScalarMap& m);

// Writes m as 8-bit grayscale after a linear min-max stretch.
void write_map_png(const std::filesystem::path& path, const ScalarMap& m);
// Writes m as 8-bit grayscale assuming values already in [0,1].
void write_unit_map_png(const std::filesystem::path& path, const ScalarMap& m);

}  // namespace hazeorder

#endif  // HAZEORDER_IO_HPP_
