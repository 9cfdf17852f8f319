// Copyright 2026 The DC3 Authors.
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
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "dc3/raster.hpp"

namespace dc3 {

// Decodes PNG or JPEG (detected from the leading bytes) into RGB8. Gray,
// palette, 16-bit and alpha inputs are converted; alpha is dropped.
Raster decode_image(std::span<const std::uint8_t> bytes);
Raster read_image(const std::filesystem::path& path);

// No timestamps or text chunks are written, so identical rasters always
// encode to identical bytes.
std::vector<std::uint8_t> encode_png(const Raster& image);
void write_png(const std::filesystem::path& path, const Raster& image);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path,
                      std::span<const std::uint8_t> bytes);

}  // namespace dc3
