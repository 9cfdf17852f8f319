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

#include <algorithm>
#include <set>

#include "dc3/error.hpp"
#include "dc3/rng.hpp"
#include "dc3/sampler.hpp"
#include "dc3/synthetic.hpp"
#include "support/oracles.hpp"

namespace dc3 {
namespace {

FeatureMatrix column(std::vector<float> xs) {
  const std::size_t n = xs.size();
  return FeatureMatrix(n, 1, std::move(xs));
}

std::vector<oracle::Point> points_of(const FeatureMatrix& f) {
  std::vector<oracle::Point> out;
  for (std::size_t i = 0; i < f.count(); ++i) {
    const auto r = f.row(i);
    out.emplace_back(r.begin(), r.end());
  }
  return out;
}

FeatureMatrix random_matrix(std::size_t n, std::size_t dim, std::uint64_t seed) {
  GaussianStream g(seed);
  FeatureMatrix f(n, dim);
  for (auto& v : f.data()) v = static_cast<float>(g.next());
  return f;
}

// Partition where bin j holds every sample i with i % m == j.
BinPartition round_robin_bins(std::size_t n, std::size_t m, std::size_t dim) {
  BinPartition p;
  p.bins = m;
  p.dim = dim;
  p.centroids.assign(m * dim, 0.0);
  for (std::size_t i = 0; i < n; ++i) p.assignment.push_back(i % m);
  return p;
}

TEST(StaticGains, OneDimensionalExample) {
  const auto f = column({0, 1, 3});
  const auto oracle_gains = oracle::static_gains(points_of(f));
  const auto g = static_gains(f);
  ASSERT_EQ(g.gains.size(), 3u);
  EXPECT_EQ(g.gains, (std::vector<double>{-10, -5, -13}));
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_DOUBLE_EQ(g.gains[i], static_cast<double>(oracle_gains[i]));
  }
  EXPECT_EQ(g.scope, GainScope::Bin);
}

TEST(StaticGains, DegenerateInputs) {
  EXPECT_EQ(static_gains(column({7})).gains, std::vector<double>{0});
  EXPECT_EQ(static_gains(column({2, 2})).gains, (std::vector<double>{0, 0}));
  EXPECT_THROW(static_gains(FeatureMatrix(0, 1)), Error);
}

TEST(IncrementalGain, DirectEvaluation) {
  const auto f = column({0, 1, 3});
  const std::vector<std::size_t> s = {1};
  // Sum over S = {1} minus sum over the complement without x.
  EXPECT_DOUBLE_EQ(incremental_gain(2, s, f), 4.0 - 9.0);
  EXPECT_DOUBLE_EQ(incremental_gain(0, s, f), 1.0 - 9.0);
  const std::vector<std::size_t> rest = {1, 2};
  EXPECT_DOUBLE_EQ(incremental_gain(0, rest, f), 1.0 + 9.0);
  try {
    incremental_gain(1, s, f);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CandidateAlreadySelected);
  }
}

TEST(BinQuotas, EvenSplitAndRemainder) {
  const std::vector<std::size_t> equal = {6, 6, 6, 6, 6};
  EXPECT_EQ(bin_quotas(equal, 10), (std::vector<std::size_t>{2, 2, 2, 2, 2}));
  const std::vector<std::size_t> sizes = {3, 9, 5, 9};
  // base 2, remainder 3 to the largest bins: 1 (9), 3 (9), 2 (5).
  EXPECT_EQ(bin_quotas(sizes, 11), (std::vector<std::size_t>{2, 3, 3, 3}));
}

TEST(BinQuotas, ShortfallCascades) {
  const std::vector<std::size_t> sizes = {1, 8, 4};
  // base 3 each; bin 0 holds only 1 -> its 2 missing picks go to bins 1, 2.
  const auto q = bin_quotas(sizes, 9);
  EXPECT_EQ(q, (std::vector<std::size_t>{1, 4, 4}));
  EXPECT_EQ(bin_quotas(sizes, 100), (std::vector<std::size_t>{1, 8, 4}));
}

// Property: quotas sum to min(budget, total) and never exceed bin sizes.
TEST(BinQuotas, AlwaysSatisfiable) {
  SplitMix64 rng(3);
  for (int t = 0; t < 500; ++t) {
    std::vector<std::size_t> sizes(1 + rng.next_below(12));
    std::size_t total = 0;
    for (auto& s : sizes) total += (s = rng.next_below(10));
    const std::size_t budget = rng.next_below(80);
    const auto q = bin_quotas(sizes, budget);
    std::size_t sum = 0;
    for (std::size_t j = 0; j < sizes.size(); ++j) {
      EXPECT_LE(q[j], sizes[j]);
      sum += q[j];
    }
    EXPECT_EQ(sum, std::min(budget, total));
  }
}

TEST(SelectPerClass, StaticTakesTopGainsPerBin) {
  const auto f = random_matrix(30, 4, 77);
  const auto bins = round_robin_bins(30, 5, 4);
  const auto r = select_per_class(f, bins, 10, SelectionMode::Static);
  EXPECT_EQ(r.per_bin_quota, (std::vector<std::size_t>{2, 2, 2, 2, 2}));
  ASSERT_EQ(r.selected.size(), 10u);
  const auto members = bins.members();
  for (std::size_t j = 0; j < 5; ++j) {
    const auto expected = oracle::best_static_subset(points_of(f.gather(members[j])), 2);
    std::vector<std::size_t> got;
    for (std::size_t k = 0; k < r.selected.size(); ++k) {
      if (r.bin_of[k] == j) got.push_back(r.selected[k]);
    }
    std::sort(got.begin(), got.end());
    EXPECT_EQ(got, (std::vector<std::size_t>{members[j][expected[0]], members[j][expected[1]]}));
  }
}

TEST(SelectPerClass, StaticTiesGoToLowerIndex) {
  // Symmetric points: samples 0 and 2 tie, as do 1 and 3.
  const auto f = column({-1, -3, 1, 3});
  const auto bins = round_robin_bins(4, 1, 1);
  const auto r = select_per_class(f, bins, 1, SelectionMode::Static);
  EXPECT_EQ(r.selected, std::vector<std::size_t>{0});
  const auto g = select_per_class(f, bins, 1, SelectionMode::Greedy);
  EXPECT_EQ(g.selected, std::vector<std::size_t>{0});
}

TEST(SelectPerClass, SaturatesAtClassSize) {
  const auto f = random_matrix(7, 2, 1);
  const auto bins = round_robin_bins(7, 3, 2);
  for (auto mode : {SelectionMode::Static, SelectionMode::Greedy}) {
    const auto r = select_per_class(f, bins, 50, mode);
    std::set<std::size_t> s(r.selected.begin(), r.selected.end());
    EXPECT_EQ(s.size(), 7u);
  }
}

TEST(SelectPerClass, GreedyMatchesFromScratchOracle) {
  SplitMix64 rng(99);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 2 + rng.next_below(11);
    const auto f = random_matrix(n, 1 + rng.next_below(4), rng.next());
    const auto bins = round_robin_bins(n, 1, f.dim());
    const std::size_t k = 1 + rng.next_below(n);
    const auto r = select_per_class(f, bins, k, SelectionMode::Greedy);
    EXPECT_EQ(r.selected, oracle::greedy_sequence(points_of(f), k));
    // Recorded gains equal the direct gain at pick time.
    std::vector<std::size_t> prefix;
    for (std::size_t i = 0; i < r.selected.size(); ++i) {
      EXPECT_NEAR(r.gains[i], incremental_gain(r.selected[i], prefix, f), 1e-7);
      prefix.push_back(r.selected[i]);
    }
  }
}

TEST(QuantizeAndSelect, IpcNotAboveBinsReclusters) {
  const auto f = random_matrix(20, 3, 5);
  const auto r = quantize_and_select(f, "c", {.bins = 5}, 2, SelectionMode::Static);
  EXPECT_EQ(r.partition.bins, 2u);
  EXPECT_EQ(r.selection.per_bin_quota, (std::vector<std::size_t>{1, 1}));
  EXPECT_EQ(effective_bins(5, 2, 20), 2u);
  EXPECT_EQ(effective_bins(10, 30, 4), 4u);
}

TEST(QuantizeAndSelect, ScaleAndTranslationInvariance) {
  SplitMix64 rng(8);
  for (int t = 0; t < 10; ++t) {
    SyntheticSpec spec;
    const auto f = random_matrix(40, 5, rng.next());
    FeatureMatrix scaled = f, shifted = f;
    for (auto& v : scaled.data()) v *= 3.7f;
    for (std::size_t i = 0; i < f.count(); ++i) {
      for (std::size_t d = 0; d < f.dim(); ++d) shifted(i, d) += static_cast<float>(d + 1.5);
    }
    for (auto mode : {SelectionMode::Static, SelectionMode::Greedy}) {
      const auto bins = round_robin_bins(40, 4, 5);
      const auto base = select_per_class(f, bins, 9, mode);
      EXPECT_EQ(select_per_class(scaled, bins, 9, mode).selected, base.selected);
      EXPECT_EQ(select_per_class(shifted, bins, 9, mode).selected, base.selected);
    }
  }
}

}  // namespace
}  // namespace dc3
