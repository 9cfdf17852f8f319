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

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dc3/raster.hpp"

namespace dc3 {

// Hasler-Suesstrunk colorfulness on 8-bit values:
//   rg = |R - G|, yb = 0.5 (R + G) - B (signed)
//   score = sqrt(sd_rg^2 + sd_yb^2) + 0.3 sqrt(mean_rg^2 + mean_yb^2)
// Standard deviations are population (divide by the pixel count).
struct ColorfulnessScore {
  double score = 0.0;
  double sigma_rg = 0.0;
  double sigma_yb = 0.0;
  double mu_rg = 0.0;
  double mu_yb = 0.0;
  double sigma_root = 0.0;
  double mu_root = 0.0;
};

ColorfulnessScore colorfulness(const Raster& image);

struct DatasetColorfulness {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;
};

// Streaming mean/min/max of per-image scores, summed in insertion order.
class ColorfulnessAccumulator {
 public:
  void add(const Raster& image) { add(colorfulness(image).score); }
  void add(double score);
  std::size_t count() const noexcept { return count_; }
  DatasetColorfulness result() const;  // throws EmptyDataset when empty

 private:
  double sum_ = 0.0;
  double min_ = std::numeric_limits<double>::infinity();
  double max_ = -std::numeric_limits<double>::infinity();
  std::size_t count_ = 0;
};

DatasetColorfulness dataset_colorfulness(std::span<const Raster> images);

enum class Channel { R = 0, G = 1, B = 2 };
std::string_view to_string(Channel channel);

inline constexpr std::size_t kKdeGridPoints = 256;

struct KdeCurve {
  Channel channel = Channel::R;
  std::vector<double> grid;     // kKdeGridPoints evenly spaced on [0, 1]
  std::vector<double> density;  // same length as grid
  double bandwidth = 0.0;

  friend bool operator==(const KdeCurve&, const KdeCurve&) = default;
};

using RgbKde = std::array<KdeCurve, 3>;

// Per-channel counts of 8-bit values. Since inputs are 8-bit, a KDE over the
// histogram equals the KDE over the raw pixel sample.
class PixelHistogram {
 public:
  void add(const Raster& image);
  std::span<const std::uint64_t, 256> counts(Channel c) const noexcept {
    return counts_[static_cast<std::size_t>(c)];
  }
  std::uint64_t total() const noexcept { return total_; }

 private:
  std::array<std::array<std::uint64_t, 256>, 3> counts_{};
  std::uint64_t total_ = 0;
};

// Silverman's rule on values k/255 with multiplicities counts[k]:
//   0.9 min(sd, IQR / 1.34) n^(-1/5), floored at one grid step (1/255).
double silverman_bandwidth(std::span<const std::uint64_t, 256> counts);

// Gaussian KDE of normalized values, reflected at 0 and 1 so the density
// integrates to one over [0, 1]. A given bandwidth applies to all channels;
// otherwise each channel gets its Silverman bandwidth.
RgbKde kde_from_histogram(const PixelHistogram& histogram,
                          std::optional<double> bandwidth = std::nullopt);
RgbKde kde_rgb(std::span<const Raster> images,
               std::optional<double> bandwidth = std::nullopt);

double trapezoid(std::span<const double> grid, std::span<const double> values);

struct HomogenizationReport {
  std::array<double, 3> l1{};  // R, G, B
  double mean = 0.0;
};

// Trapezoidal L1 distance between the densities of each channel.
HomogenizationReport homogenization_report(const RgbKde& original,
                                           const RgbKde& condensed);

}  // namespace dc3
