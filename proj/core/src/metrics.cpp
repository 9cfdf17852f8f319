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
#include "dc3/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dc3/error.hpp"

namespace dc3 {
namespace {

constexpr double kGridStep = 1.0 / (kKdeGridPoints - 1);

std::vector<double> make_grid() {
  std::vector<double> grid(kKdeGridPoints);
  for (std::size_t i = 0; i < kKdeGridPoints; ++i) grid[i] = i * kGridStep;
  return grid;
}

// Value of the sorted sample at (fractional) rank `pos`.
double value_at_rank(std::span<const std::uint64_t, 256> counts, double pos) {
  const auto lower = static_cast<std::uint64_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(lower);
  auto nth = [&](std::uint64_t rank) {
    std::uint64_t seen = 0;
    for (std::size_t v = 0; v < 256; ++v) {
      seen += counts[v];
      if (rank < seen) return static_cast<double>(v) / 255.0;
    }
    return 1.0;
  };
  const double a = nth(lower);
  return frac == 0.0 ? a : a + frac * (nth(lower + 1) - a);
}

}  // namespace

ColorfulnessScore colorfulness(const Raster& image) {
  if (image.empty()) throw Error(ErrorCode::EmptyImage, "colorfulness");
  const std::size_t n = image.pixel_count();
  const auto* px = image.pixels.data();

  double sum_rg = 0.0;
  double sum_yb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = px[3 * i], g = px[3 * i + 1], b = px[3 * i + 2];
    sum_rg += std::abs(r - g);
    sum_yb += 0.5 * (r + g) - b;
  }
  ColorfulnessScore s;
  s.mu_rg = sum_rg / static_cast<double>(n);
  s.mu_yb = sum_yb / static_cast<double>(n);

  double ss_rg = 0.0;
  double ss_yb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = px[3 * i], g = px[3 * i + 1], b = px[3 * i + 2];
    const double drg = std::abs(r - g) - s.mu_rg;
    const double dyb = 0.5 * (r + g) - b - s.mu_yb;
    ss_rg += drg * drg;
    ss_yb += dyb * dyb;
  }
  s.sigma_rg = std::sqrt(ss_rg / static_cast<double>(n));
  s.sigma_yb = std::sqrt(ss_yb / static_cast<double>(n));
  s.sigma_root = std::hypot(s.sigma_rg, s.sigma_yb);
  s.mu_root = std::hypot(s.mu_rg, s.mu_yb);
  s.score = s.sigma_root + 0.3 * s.mu_root;
  return s;
}

void ColorfulnessAccumulator::add(double score) {
  sum_ += score;
  min_ = std::min(min_, score);
  max_ = std::max(max_, score);
  ++count_;
}

DatasetColorfulness ColorfulnessAccumulator::result() const {
  if (count_ == 0) throw Error(ErrorCode::EmptyDataset, "colorfulness");
  return {sum_ / static_cast<double>(count_), min_, max_, count_};
}

DatasetColorfulness dataset_colorfulness(std::span<const Raster> images) {
  ColorfulnessAccumulator acc;
  for (const auto& image : images) acc.add(image);
  return acc.result();
}

std::string_view to_string(Channel channel) {
  switch (channel) {
    case Channel::R: return "R";
    case Channel::G: return "G";
    case Channel::B: return "B";
  }
  return "?";
}

void PixelHistogram::add(const Raster& image) {
  for (std::size_t i = 0; i < image.pixels.size(); i += 3) {
    ++counts_[0][image.pixels[i]];
    ++counts_[1][image.pixels[i + 1]];
    ++counts_[2][image.pixels[i + 2]];
  }
  total_ += image.pixel_count();
}

double silverman_bandwidth(std::span<const std::uint64_t, 256> counts) {
  std::uint64_t n = 0;
  double sum = 0.0;
  for (std::size_t v = 0; v < 256; ++v) {
    n += counts[v];
    sum += static_cast<double>(counts[v]) * (v / 255.0);
  }
  if (n == 0) throw Error(ErrorCode::EmptyDataset, "bandwidth of an empty sample");
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t v = 0; v < 256; ++v) {
    const double d = v / 255.0 - mean;
    ss += static_cast<double>(counts[v]) * d * d;
  }
  const double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
  const double last = static_cast<double>(n - 1);
  const double iqr = value_at_rank(counts, 0.75 * last) - value_at_rank(counts, 0.25 * last);
  double spread = std::min(sd, iqr / 1.34);
  if (spread <= 0.0) spread = sd;
  const double h = 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
  return std::max(h, kGridStep);
}

RgbKde kde_from_histogram(const PixelHistogram& histogram,
                          std::optional<double> bandwidth) {
  if (histogram.total() == 0) throw Error(ErrorCode::EmptyDataset, "kde");
  if (bandwidth && !(*bandwidth > 0.0)) {
    throw Error(ErrorCode::ConfigInvalid, "bandwidth must be positive");
  }
  const auto grid = make_grid();
  const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  RgbKde out;
  for (std::size_t c = 0; c < 3; ++c) {
    const auto channel = static_cast<Channel>(c);
    const auto counts = histogram.counts(channel);
    KdeCurve& curve = out[c];
    curve.channel = channel;
    curve.grid = grid;
    curve.bandwidth = bandwidth ? *bandwidth : silverman_bandwidth(counts);
    curve.density.assign(kKdeGridPoints, 0.0);
    const double h = curve.bandwidth;
    const double scale = norm / (h * static_cast<double>(histogram.total()));
    for (std::size_t g = 0; g < kKdeGridPoints; ++g) {
      const double x = grid[g];
      double acc = 0.0;
      for (std::size_t v = 0; v < 256; ++v) {
        if (counts[v] == 0) continue;
        const double s = v / 255.0;
        const double k = std::exp(-0.5 * std::pow((x - s) / h, 2)) +
                         std::exp(-0.5 * std::pow((x + s) / h, 2)) +
                         std::exp(-0.5 * std::pow((x - (2.0 - s)) / h, 2));
        acc += static_cast<double>(counts[v]) * k;
      }
      curve.density[g] = acc * scale;
    }
  }
  return out;
}

RgbKde kde_rgb(std::span<const Raster> images, std::optional<double> bandwidth) {
  PixelHistogram histogram;
  for (const auto& image : images) histogram.add(image);
  return kde_from_histogram(histogram, bandwidth);
}

double trapezoid(std::span<const double> grid, std::span<const double> values) {
  double total = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    total += 0.5 * (values[i] + values[i - 1]) * (grid[i] - grid[i - 1]);
  }
  return total;
}

HomogenizationReport homogenization_report(const RgbKde& original,
                                           const RgbKde& condensed) {
  HomogenizationReport report;
  for (std::size_t c = 0; c < 3; ++c) {
    const auto& a = original[c];
    const auto& b = condensed[c];
    if (a.grid != b.grid || a.density.size() != a.grid.size() ||
        b.density.size() != b.grid.size()) {
      throw Error(ErrorCode::GridMismatch, std::string(to_string(a.channel)));
    }
    std::vector<double> diff(a.grid.size());
    for (std::size_t i = 0; i < diff.size(); ++i) {
      diff[i] = std::abs(a.density[i] - b.density[i]);
    }
    report.l1[c] = trapezoid(a.grid, diff);
  }
  report.mean = (report.l1[0] + report.l1[1] + report.l1[2]) / 3.0;
  return report;
}

}  // namespace dc3
