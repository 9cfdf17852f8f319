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
#include "dc3/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dc3/error.hpp"
#include "dc3/image_io.hpp"
#include "dc3/rng.hpp"

namespace dc3 {

GaussianStream::GaussianStream(std::uint64_t seed) : state_(seed) {}

double GaussianStream::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  SplitMix64 rng(state_);
  double u1 = rng.next_double();
  const double u2 = rng.next_double();
  state_ = rng.next();
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Raster synthetic_image(int width, int height, double saturation, std::uint64_t seed) {
  SplitMix64 rng(seed);
  const double base = 70.0 + 110.0 * rng.next_double();
  const double slope_x = (rng.next_double() - 0.5) * 60.0;
  const double slope_y = (rng.next_double() - 0.5) * 60.0;
  double tint[3];
  for (double& t : tint) t = (rng.next_double() * 2.0 - 1.0) * saturation;
  Raster out(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double fx = width > 1 ? double(x) / (width - 1) - 0.5 : 0.0;
      const double fy = height > 1 ? double(y) / (height - 1) - 0.5 : 0.0;
      const double gray = base + slope_x * fx + slope_y * fy;
      auto* px = out.at(x, y);
      for (int c = 0; c < 3; ++c) {
        const double v = gray * (1.0 + tint[c]) + (rng.next_double() - 0.5) * 4.0;
        px[c] = static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
      }
    }
  }
  return out;
}

DatasetManifest write_synthetic_dataset(const std::filesystem::path& dir,
                                        const SyntheticSpec& spec) {
  if (spec.classes.empty() || spec.dim == 0 || spec.blobs == 0) {
    throw Error(ErrorCode::ConfigInvalid, "synthetic spec needs classes, dim and blobs");
  }
  std::filesystem::create_directories(dir / "images");
  DatasetManifest manifest;
  manifest.name = "synthetic";
  manifest.classes = spec.classes;
  manifest.feature_file = "features.bin";
  manifest.root = dir;

  const std::size_t total = spec.classes.size() * spec.per_class;
  FeatureMatrix features(total, spec.dim);
  GaussianStream noise(SplitMix64::mix(spec.seed ^ 0xFEA7u));
  std::size_t row = 0;
  for (const auto& label : spec.classes) {
    SplitMix64 centers_rng(derive_seed(spec.seed, label));
    std::vector<double> centers(spec.blobs * spec.dim);
    for (double& c : centers) c = (centers_rng.next_double() * 2.0 - 1.0) * spec.center_range;
    std::filesystem::create_directories(dir / "images" / label);
    for (std::size_t k = 0; k < spec.per_class; ++k, ++row) {
      const std::size_t blob = k % spec.blobs;
      for (std::size_t d = 0; d < spec.dim; ++d) {
        features(row, d) = static_cast<float>(centers[blob * spec.dim + d] +
                                              spec.blob_spread * noise.next());
      }
      SampleRecord s;
      s.id = label + "-" + std::to_string(k);
      s.class_label = label;
      s.image_path = "images/" + label + "/" + s.id + ".png";
      s.feature_row = row;
      write_png(dir / s.image_path,
                synthetic_image(spec.width, spec.height, spec.saturation,
                                derive_seed(spec.seed, s.id)));
      manifest.samples.push_back(std::move(s));
    }
  }
  write_features(dir / manifest.feature_file, features);
  write_manifest(dir / "manifest.json", manifest);
  return manifest;
}

}  // namespace dc3
