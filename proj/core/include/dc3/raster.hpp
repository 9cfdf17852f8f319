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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dc3 {

// Interleaved 8-bit RGB image, row-major.
struct Raster {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  Raster() = default;
  Raster(int w, int h) : width(w), height(h), pixels(3 * std::size_t(w) * h) {}
  Raster(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b)
      : Raster(w, h) {
    fill(r, g, b);
  }

  std::size_t pixel_count() const noexcept {
    return std::size_t(width) * std::size_t(height);
  }
  bool empty() const noexcept { return pixel_count() == 0; }

  std::uint8_t* at(int x, int y) noexcept {
    return pixels.data() + 3 * (std::size_t(y) * width + x);
  }
  const std::uint8_t* at(int x, int y) const noexcept {
    return pixels.data() + 3 * (std::size_t(y) * width + x);
  }

  void fill(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    for (std::size_t i = 0; i < pixels.size(); i += 3) {
      pixels[i] = r;
      pixels[i + 1] = g;
      pixels[i + 2] = b;
    }
  }

  bool same_size(const Raster& other) const noexcept {
    return width == other.width && height == other.height;
  }

  friend bool operator==(const Raster&, const Raster&) = default;
};

}  // namespace dc3
