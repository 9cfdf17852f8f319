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

#include "dc3/error.hpp"
#include "dc3/quantizer.hpp"
#include "dc3/rng.hpp"
#include "dc3/synthetic.hpp"
#include "support/oracles.hpp"

namespace dc3 {
namespace {

FeatureMatrix column(std::vector<float> xs) {
  const std::size_t n = xs.size();
  return FeatureMatrix(n, 1, std::move(xs));
}

FeatureMatrix random_matrix(std::size_t n, std::size_t dim, std::uint64_t seed) {
  GaussianStream g(seed);
  FeatureMatrix f(n, dim);
  for (auto& v : f.data()) v = static_cast<float>(g.next());
  return f;
}

TEST(Assign, TieGoesToLowestIndex) {
  const std::vector<double> centroids = {0.0, 10.0};
  const std::vector<float> mid = {5.0f};
  EXPECT_EQ(assign(mid, centroids, 1), 0u);
  const std::vector<float> four = {4.0f};
  EXPECT_EQ(assign(four, centroids, 1), 0u);  // 16 < 36
}

TEST(Assign, ExactCentroidMatch) {
  const std::vector<double> centroids = {0, 0, 1, 1, 2, 2};
  const std::vector<float> p = {2.0f, 2.0f};
  EXPECT_EQ(assign(p, centroids, 2), 2u);
}

TEST(Assign, DimensionMismatch) {
  const std::vector<double> centroids = {0, 0, 1, 1};
  const std::vector<float> p = {1.0f, 2.0f, 3.0f};
  EXPECT_THROW(assign(p, centroids, 2), Error);
}

TEST(KMeans, OneDimensionalTwoBinsMatchesExhaustiveOracle) {
  const std::vector<double> xs = {0.0, 0.1, 10.0, 10.1};
  const auto oracle = oracle::best_two_partition(xs);
  const auto part = kmeans_partition(column({0.0f, 0.1f, 10.0f, 10.1f}), {.bins = 2});
  ASSERT_TRUE(part.converged);
  // Same grouping up to label permutation.
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t k = 0; k < xs.size(); ++k) {
      EXPECT_EQ(part.assignment[i] == part.assignment[k],
                oracle.group_of[i] == oracle.group_of[k]);
    }
  }
  std::vector<double> c = {part.centroids[0], part.centroids[1]};
  std::sort(c.begin(), c.end());
  EXPECT_NEAR(c[0], 0.05, 1e-6);
  EXPECT_NEAR(c[1], 10.05, 1e-6);
  EXPECT_NEAR(part.inertia, static_cast<double>(oracle.inertia), 1e-6);
}

TEST(KMeans, SingleBinIsTheMean) {
  const auto f = random_matrix(17, 3, 4);
  const auto part = kmeans_partition(f, {.bins = 1});
  ASSERT_EQ(part.bins, 1u);
  for (auto a : part.assignment) EXPECT_EQ(a, 0u);
  for (std::size_t d = 0; d < 3; ++d) {
    double mean = 0;
    for (std::size_t i = 0; i < 17; ++i) mean += f(i, d);
    EXPECT_NEAR(part.centroids[d], mean / 17, 1e-9);
  }
}

TEST(KMeans, BinsClampToClassSize) {
  const auto part = kmeans_partition(column({1.0f, 5.0f, 9.0f}), {.bins = 5});
  EXPECT_EQ(part.bins, 3u);
  auto sizes = part.bin_sizes();
  EXPECT_EQ(sizes, (std::vector<std::size_t>{1, 1, 1}));
}

TEST(KMeans, EmptyInputThrows) {
  try {
    kmeans_partition(FeatureMatrix(0, 2), {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyInput);
  }
}

TEST(KMeans, DuplicatePointsStillFillEveryBin) {
  const auto part = kmeans_partition(column({3, 3, 3, 3, 3, 3}), {.bins = 3});
  for (auto s : part.bin_sizes()) EXPECT_GE(s, 1u);
  EXPECT_TRUE(part.converged);
  EXPECT_EQ(part.inertia, 0.0);
}

TEST(KMeans, DeterministicForSeed) {
  const auto f = random_matrix(60, 4, 9);
  const auto a = kmeans_partition(f, {.bins = 6, .seed = 42});
  const auto b = kmeans_partition(f, {.bins = 6, .seed = 42});
  EXPECT_EQ(a.assignment, b.assignment);
  EXPECT_EQ(a.centroids, b.centroids);
  EXPECT_EQ(a.inertia_history, b.inertia_history);
}

// Properties over seeded instances: every stored label is its nearest centroid,
// inertia never rises, and no bin is empty.
TEST(KMeans, ConvergedPartitionsSatisfyInvariants) {
  SplitMix64 rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 5 + rng.next_below(80);
    const std::size_t dim = 1 + rng.next_below(6);
    const auto f = random_matrix(n, dim, rng.next());
    const KMeansOptions opt{.bins = 1 + rng.next_below(12), .seed = rng.next()};
    const auto part = kmeans_partition(f, opt);
    ASSERT_TRUE(part.converged);
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = f.row(i);
      const std::size_t nearest = assign(row, part.centroids, dim);
      EXPECT_EQ(squared_distance(row, part.centroid(part.assignment[i])),
                squared_distance(row, part.centroid(nearest)));
    }
    for (std::size_t k = 1; k < part.inertia_history.size(); ++k) {
      EXPECT_LE(part.inertia_history[k] - part.inertia_history[k - 1], 1e-9);
    }
    for (auto s : part.bin_sizes()) EXPECT_GE(s, 1u);
  }
}

TEST(KMeans, SeparatedBlobsAreRecovered) {
  SyntheticSpec spec;
  GaussianStream g(1);
  // Three far-apart blobs of 10 points each.
  FeatureMatrix f(30, 2);
  for (std::size_t i = 0; i < 30; ++i) {
    f(i, 0) = static_cast<float>(100.0 * (i % 3) + 0.1 * g.next());
    f(i, 1) = static_cast<float>(0.1 * g.next());
  }
  const auto part = kmeans_partition(f, {.bins = 3, .seed = 7});
  for (std::size_t i = 3; i < 30; ++i) {
    EXPECT_EQ(part.assignment[i], part.assignment[i % 3]);
  }
}

}  // namespace
}  // namespace dc3
