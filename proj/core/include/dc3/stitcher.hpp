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
#include <string>
#include <string_view>
#include <vector>

#include "dc3/raster.hpp"

namespace dc3 {

enum class StitchKind { Half2, Quarter4, PixelMask, Grid };

struct StitchStrategy {
  StitchKind kind = StitchKind::Half2;
  double fraction = 0.5;  // PixelMask: share of pixels from variant 0
  int grid = 8;           // Grid: cells per side

  static StitchStrategy half2() { return {}; }
  static StitchStrategy quarter4() { return {StitchKind::Quarter4}; }
  static StitchStrategy pixels(double fraction) {
    return {StitchKind::PixelMask, fraction};
  }
  static StitchStrategy grid_of(int n) { return {StitchKind::Grid, 0.5, n}; }

  friend bool operator==(const StitchStrategy&, const StitchStrategy&) = default;
};

// CLI spelling: half2 | quarter4 | pixels:F | grid:N
StitchStrategy parse_stitch_strategy(std::string_view text);
std::string to_string(const StitchStrategy& strategy);

std::size_t required_variants(const StitchStrategy& strategy);

// Source variant index for every pixel, row-major.
//   Half2     left columns [0, W/2) -> 0, the rest -> 1
//   Quarter4  TL, TR, BL, BR -> 0, 1, 2, 3, split at (W/2, H/2)
//   PixelMask round(f*W*H) seeded-uniform pixels -> 0, the rest -> 1
//   Grid(n)   n x n cells (last row/column absorb the remainder);
//             ceil(n^2/2) seeded-shuffled cells -> 0, the rest -> 1
std::vector<std::uint8_t> provenance_mask(const StitchStrategy& strategy,
                                          std::uint64_t seed, int width,
                                          int height);

// Every output pixel is copied from the same coordinate of the variant the
// mask names; nothing is blended or resampled.
Raster stitch(std::span<const Raster> variants, const StitchStrategy& strategy,
              std::uint64_t seed);

}  // namespace dc3
