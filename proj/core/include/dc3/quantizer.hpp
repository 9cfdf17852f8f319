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
#include <vector>

#include "dc3/catalog.hpp"

namespace dc3 {

struct KMeansOptions {
  std::size_t bins = 10;
  std::uint64_t seed = 0;
  std::size_t max_iters = 100;
  double tol = 1e-6;
};

// One class's samples partitioned into bins. Sample indices are positions in
// the class feature matrix the partition was computed from.
struct BinPartition {
  std::string class_label;
  std::size_t bins = 0;  // after clamping to the class size
  std::size_t dim = 0;
  std::vector<double> centroids;  // bins x dim, row-major
  std::vector<std::size_t> assignment;
  double inertia = 0.0;
  std::vector<double> inertia_history;  // one entry per centroid update
  std::size_t iterations = 0;
  bool converged = false;

  std::span<const double> centroid(std::size_t j) const noexcept {
    return {centroids.data() + j * dim, dim};
  }
  std::vector<std::size_t> bin_sizes() const;
  // Sample indices per bin, ascending.
  std::vector<std::vector<std::size_t>> members() const;
};

double squared_distance(std::span<const float> point,
                        std::span<const double> centroid) noexcept;

// Index of the nearest centroid by squared Euclidean distance; the lowest
// index wins ties. `centroids` is row-major with `dim` columns.
std::size_t assign(std::span<const float> point,
                   std::span<const double> centroids, std::size_t dim);

// Lloyd iterations from k-means++ seeding. Bins that empty out are refilled
// with the point farthest from its own centroid. Deterministic for a fixed
// (ordered features, options).
BinPartition kmeans_partition(const FeatureMatrix& features,
                              const KMeansOptions& options,
                              std::string class_label = {});

}  // namespace dc3
