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
#include <filesystem>
#include <string>
#include <vector>

#include "dc3/catalog.hpp"
#include "dc3/raster.hpp"

namespace dc3 {

// Seeded standard normal draws (Box-Muller on a SplitMix64 stream), identical
// on every platform.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed);
  double next();

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// A small labelled dataset: per class, `blobs` Gaussian clusters in feature
// space with members assigned round-robin, and low-saturation images.
struct SyntheticSpec {
  std::vector<std::string> classes = {"alpha", "beta", "gamma"};
  std::size_t per_class = 30;
  std::size_t blobs = 5;
  std::size_t dim = 8;
  double blob_spread = 0.3;
  double center_range = 10.0;
  int width = 32;
  int height = 32;
  double saturation = 0.12;  // tint amplitude relative to gray level
  std::uint64_t seed = 0;
};

// Low-saturation image: a gray gradient with a faint random tint.
Raster synthetic_image(int width, int height, double saturation, std::uint64_t seed);

// Writes manifest.json, features.bin and images/<class>/<id>.png.
DatasetManifest write_synthetic_dataset(const std::filesystem::path& dir,
                                        const SyntheticSpec& spec);

}  // namespace dc3
