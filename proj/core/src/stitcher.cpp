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
#include "dc3/stitcher.hpp"

#include <charconv>
#include <cmath>
#include <numeric>

#include "dc3/error.hpp"
#include "dc3/rng.hpp"

namespace dc3 {
namespace {

void validate(const StitchStrategy& s) {
  if (s.kind == StitchKind::PixelMask && !(s.fraction >= 0.0 && s.fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidStrategy, "pixel fraction must be in [0, 1]");
  }
  if (s.kind == StitchKind::Grid && s.grid < 1) {
    throw Error(ErrorCode::InvalidStrategy, "grid size must be positive");
  }
}

// Fisher-Yates from the back; the first k entries afterwards are a uniform
// k-subset.
void shuffle(std::vector<std::size_t>& items, std::uint64_t seed) {
  SplitMix64 rng(seed);
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = rng.next_below(i);
    std::swap(items[i - 1], items[j]);
  }
}

// Start offset of cell k of n along an axis of the given length.
int cell_start(int k, int n, int length) { return k * (length / n); }
int cell_end(int k, int n, int length) {
  return k + 1 == n ? length : (k + 1) * (length / n);
}

}  // namespace

StitchStrategy parse_stitch_strategy(std::string_view text) {
  if (text == "half2") return StitchStrategy::half2();
  if (text == "quarter4") return StitchStrategy::quarter4();
  auto parse_tail = [&](std::string_view prefix, auto& value) {
    const std::string_view tail = text.substr(prefix.size());
    const auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), value);
    if (ec != std::errc() || ptr != tail.data() + tail.size()) {
      throw Error(ErrorCode::InvalidStrategy, std::string(text));
    }
  };
  StitchStrategy s;
  if (text.starts_with("pixels:")) {
    s.kind = StitchKind::PixelMask;
    parse_tail("pixels:", s.fraction);
  } else if (text.starts_with("grid:")) {
    s.kind = StitchKind::Grid;
    parse_tail("grid:", s.grid);
  } else {
    throw Error(ErrorCode::InvalidStrategy, std::string(text));
  }
  validate(s);
  return s;
}

std::string to_string(const StitchStrategy& strategy) {
  switch (strategy.kind) {
    case StitchKind::Half2: return "half2";
    case StitchKind::Quarter4: return "quarter4";
    case StitchKind::PixelMask: {
      char buf[64];
      const auto r = std::to_chars(buf, buf + sizeof(buf), strategy.fraction);
      return "pixels:" + std::string(buf, r.ptr);
    }
    case StitchKind::Grid: return "grid:" + std::to_string(strategy.grid);
  }
  return "?";
}

std::size_t required_variants(const StitchStrategy& strategy) {
  return strategy.kind == StitchKind::Quarter4 ? 4 : 2;
}

std::vector<std::uint8_t> provenance_mask(const StitchStrategy& strategy,
                                          std::uint64_t seed, int width,
                                          int height) {
  validate(strategy);
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::EmptyImage, std::to_string(width) + "x" +
                                           std::to_string(height));
  }
  const std::size_t w = static_cast<std::size_t>(width);
  const std::size_t total = w * static_cast<std::size_t>(height);
  std::vector<std::uint8_t> mask(total, 1);

  switch (strategy.kind) {
    case StitchKind::Half2:
      for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width / 2; ++x) mask[y * w + x] = 0;
      }
      break;
    case StitchKind::Quarter4:
      for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
          mask[y * w + x] = static_cast<std::uint8_t>((y >= height / 2 ? 2 : 0) +
                                                      (x >= width / 2 ? 1 : 0));
        }
      }
      break;
    case StitchKind::PixelMask: {
      const auto take = static_cast<std::size_t>(
          std::llround(strategy.fraction * static_cast<double>(total)));
      std::vector<std::size_t> order(total);
      std::iota(order.begin(), order.end(), 0);
      shuffle(order, seed);
      for (std::size_t k = 0; k < take; ++k) mask[order[k]] = 0;
      break;
    }
    case StitchKind::Grid: {
      const int n = strategy.grid;
      if (width < n || height < n) {
        throw Error(ErrorCode::DimensionMismatch,
                    std::to_string(width) + "x" + std::to_string(height) +
                        " image is smaller than a " + std::to_string(n) + "x" +
                        std::to_string(n) + " grid");
      }
      const std::size_t cells = std::size_t(n) * n;
      std::vector<std::size_t> order(cells);
      std::iota(order.begin(), order.end(), 0);
      shuffle(order, seed);
      std::vector<std::uint8_t> cell_source(cells, 1);
      for (std::size_t k = 0; k < (cells + 1) / 2; ++k) cell_source[order[k]] = 0;
      for (int cy = 0; cy < n; ++cy) {
        for (int cx = 0; cx < n; ++cx) {
          const std::uint8_t src = cell_source[std::size_t(cy) * n + cx];
          for (int y = cell_start(cy, n, height); y < cell_end(cy, n, height); ++y) {
            for (int x = cell_start(cx, n, width); x < cell_end(cx, n, width); ++x) {
              mask[y * w + x] = src;
            }
          }
        }
      }
      break;
    }
  }
  return mask;
}

Raster stitch(std::span<const Raster> variants, const StitchStrategy& strategy,
              std::uint64_t seed) {
  if (variants.size() != required_variants(strategy)) {
    throw Error(ErrorCode::WrongVariantCount,
                to_string(strategy) + " takes " +
                    std::to_string(required_variants(strategy)) + ", got " +
                    std::to_string(variants.size()));
  }
  const Raster& first = variants.front();
  for (const auto& v : variants) {
    if (!v.same_size(first)) {
      throw Error(ErrorCode::DimensionMismatch,
                  std::to_string(v.width) + "x" + std::to_string(v.height) + " vs " +
                      std::to_string(first.width) + "x" + std::to_string(first.height));
    }
  }
  const auto mask = provenance_mask(strategy, seed, first.width, first.height);
  Raster out(first.width, first.height);
  for (std::size_t p = 0; p < mask.size(); ++p) {
    const auto& src = variants[mask[p]].pixels;
    out.pixels[3 * p] = src[3 * p];
    out.pixels[3 * p + 1] = src[3 * p + 1];
    out.pixels[3 * p + 2] = src[3 * p + 2];
  }
  return out;
}

}  // namespace dc3
