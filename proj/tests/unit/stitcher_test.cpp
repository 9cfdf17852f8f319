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
#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "dc3/error.hpp"
#include "dc3/rng.hpp"
#include "dc3/stitcher.hpp"

namespace dc3 {
namespace {

// Solid, pairwise distinct variants so every output pixel names its source.
std::vector<Raster> solid_variants(std::size_t n, int w, int h) {
  std::vector<Raster> v;
  for (std::size_t i = 0; i < n; ++i) {
    v.emplace_back(w, h, static_cast<std::uint8_t>(10 + 40 * i), 7, 200);
  }
  return v;
}

int source_of(const Raster& out, int x, int y) {
  return (out.at(x, y)[0] - 10) / 40;
}

std::vector<std::size_t> count_sources(const Raster& out, std::size_t n) {
  std::vector<std::size_t> c(n, 0);
  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < out.width; ++x) ++c[source_of(out, x, y)];
  }
  return c;
}

TEST(Stitch, Half2LeftColumnsFromFirst) {
  const auto v = solid_variants(2, 4, 4);
  const Raster out = stitch(v, StitchStrategy::half2(), 0);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 4; ++x) EXPECT_EQ(source_of(out, x, y), x < 2 ? 0 : 1);
  }
  // Odd widths give the extra column to the second source.
  const auto odd = solid_variants(2, 5, 3);
  EXPECT_EQ(count_sources(stitch(odd, StitchStrategy::half2(), 0), 2),
            (std::vector<std::size_t>{6, 9}));
}

TEST(Stitch, Half2OfIdenticalInputsIsIdentity) {
  SplitMix64 rng(1);
  Raster a(9, 7);
  for (auto& p : a.pixels) p = static_cast<std::uint8_t>(rng.next_below(256));
  const std::vector<Raster> v = {a, a};
  EXPECT_EQ(stitch(v, StitchStrategy::half2(), 3), a);
}

TEST(Stitch, Quarter4Quadrants) {
  const auto v = solid_variants(4, 6, 4);
  const Raster out = stitch(v, StitchStrategy::quarter4(), 0);
  EXPECT_EQ(source_of(out, 0, 0), 0);
  EXPECT_EQ(source_of(out, 5, 0), 1);
  EXPECT_EQ(source_of(out, 0, 3), 2);
  EXPECT_EQ(source_of(out, 5, 3), 3);
  EXPECT_EQ(count_sources(out, 4), (std::vector<std::size_t>{6, 6, 6, 6}));
}

TEST(Stitch, PixelMaskCounts) {
  const auto v = solid_variants(2, 7, 5);
  const Raster out = stitch(v, StitchStrategy::pixels(0.5), 11);
  // 35 pixels: half is 17.5, rounded up.
  EXPECT_EQ(count_sources(out, 2)[0], 18u);
  EXPECT_EQ(count_sources(stitch(v, StitchStrategy::pixels(0.0), 1), 2)[0], 0u);
  EXPECT_EQ(count_sources(stitch(v, StitchStrategy::pixels(1.0), 1), 2)[0], 35u);
  EXPECT_NE(stitch(v, StitchStrategy::pixels(0.5), 11),
            stitch(v, StitchStrategy::pixels(0.5), 12));
  EXPECT_EQ(stitch(v, StitchStrategy::pixels(0.5), 11), out);
}

TEST(Stitch, GridCellsSplitEvenly) {
  {
    const auto v = solid_variants(2, 224, 224);
    const auto mask = provenance_mask(StitchStrategy::grid_of(8), 5, 224, 224);
    // 28x28 cells; count cells by their top-left pixel.
    std::size_t first = 0;
    for (int cy = 0; cy < 8; ++cy) {
      for (int cx = 0; cx < 8; ++cx) first += mask[cy * 28 * 224 + cx * 28] == 0;
    }
    EXPECT_EQ(first, 32u);
    EXPECT_EQ(count_sources(stitch(v, StitchStrategy::grid_of(8), 5), 2)[0], 32u * 28 * 28);
  }
  {
    const auto v = solid_variants(2, 32, 32);
    const auto c = count_sources(stitch(v, StitchStrategy::grid_of(16), 2), 2);
    EXPECT_EQ(c[0], 128u * 4);
    EXPECT_EQ(c[1], 128u * 4);
  }
}

TEST(Stitch, GridCellsAreUniform) {
  // 10x10 with a 3x3 grid: cells are 3 wide, last row/column absorb 1 extra.
  const auto mask = provenance_mask(StitchStrategy::grid_of(3), 9, 10, 10);
  const int starts[] = {0, 3, 6};
  const int ends[] = {3, 6, 10};
  std::size_t first_cells = 0;
  for (int cy = 0; cy < 3; ++cy) {
    for (int cx = 0; cx < 3; ++cx) {
      const auto src = mask[starts[cy] * 10 + starts[cx]];
      first_cells += src == 0;
      for (int y = starts[cy]; y < ends[cy]; ++y) {
        for (int x = starts[cx]; x < ends[cx]; ++x) ASSERT_EQ(mask[y * 10 + x], src);
      }
    }
  }
  EXPECT_EQ(first_cells, 5u);
}

// Every output pixel equals the same pixel of the variant the mask names.
TEST(Stitch, ProvenanceProperty) {
  SplitMix64 rng(77);
  const StitchStrategy strategies[] = {StitchStrategy::half2(), StitchStrategy::quarter4(),
                                       StitchStrategy::pixels(0.3), StitchStrategy::grid_of(4)};
  for (const auto& s : strategies) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const int w = 4 + int(rng.next_below(30));
      const int h = 4 + int(rng.next_below(30));
      std::vector<Raster> v;
      for (std::size_t i = 0; i < required_variants(s); ++i) {
        Raster r(w, h);
        for (auto& p : r.pixels) p = static_cast<std::uint8_t>(rng.next_below(256));
        v.push_back(std::move(r));
      }
      const Raster out = stitch(v, s, seed);
      const auto mask = provenance_mask(s, seed, w, h);
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          const auto* o = out.at(x, y);
          const auto* src = v[mask[y * w + x]].at(x, y);
          ASSERT_TRUE(o[0] == src[0] && o[1] == src[1] && o[2] == src[2]);
        }
      }
    }
  }
}

TEST(Stitch, Errors) {
  const auto two = solid_variants(2, 8, 8);
  const auto three = solid_variants(3, 8, 8);
  auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Io;
  };
  EXPECT_EQ(code_of([&] { stitch(three, StitchStrategy::half2(), 0); }),
            ErrorCode::WrongVariantCount);
  EXPECT_EQ(code_of([&] { stitch(two, StitchStrategy::quarter4(), 0); }),
            ErrorCode::WrongVariantCount);
  std::vector<Raster> mixed = {Raster(8, 8), Raster(8, 9)};
  EXPECT_EQ(code_of([&] { stitch(mixed, StitchStrategy::half2(), 0); }),
            ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of([&] { stitch(two, StitchStrategy::grid_of(9), 0); }),
            ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of([&] { stitch(two, StitchStrategy::pixels(1.5), 0); }),
            ErrorCode::InvalidStrategy);
}

TEST(StitchStrategyText, ParseAndFormat) {
  EXPECT_EQ(parse_stitch_strategy("half2"), StitchStrategy::half2());
  EXPECT_EQ(parse_stitch_strategy("quarter4"), StitchStrategy::quarter4());
  EXPECT_EQ(parse_stitch_strategy("pixels:0.25"), StitchStrategy::pixels(0.25));
  EXPECT_EQ(parse_stitch_strategy("grid:8"), StitchStrategy::grid_of(8));
  for (const char* bad : {"", "half", "pixels:", "pixels:x", "pixels:2", "grid:0", "grid:3x",
                          "quarter4 "}) {
    EXPECT_THROW(parse_stitch_strategy(bad), Error) << bad;
  }
  for (const char* text : {"half2", "quarter4", "pixels:0.25", "grid:16"}) {
    EXPECT_EQ(to_string(parse_stitch_strategy(text)), text);
  }
  EXPECT_EQ(required_variants(StitchStrategy::quarter4()), 4u);
  EXPECT_EQ(required_variants(StitchStrategy::grid_of(4)), 2u);
}

}  // namespace
}  // namespace dc3
