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
#include <benchmark/benchmark.h>

#include <vector>

#include "dc3/metrics.hpp"
#include "dc3/quantizer.hpp"
#include "dc3/rng.hpp"
#include "dc3/sampler.hpp"
#include "dc3/stitcher.hpp"
#include "dc3/synthetic.hpp"

namespace {

dc3::FeatureMatrix random_features(std::size_t n, std::size_t dim) {
  dc3::GaussianStream g(n * 31 + dim);
  dc3::FeatureMatrix f(n, dim);
  for (auto& v : f.data()) v = static_cast<float>(g.next());
  return f;
}

void BM_KMeans(benchmark::State& state) {
  const auto f = random_features(static_cast<std::size_t>(state.range(0)), 64);
  dc3::KMeansOptions options;
  options.bins = 10;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dc3::kmeans_partition(f, options, "c"));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_KMeans)->Arg(130)->Arg(1300);

void BM_StaticGains(benchmark::State& state) {
  const auto f = random_features(static_cast<std::size_t>(state.range(0)), 64);
  for (auto _ : state) benchmark::DoNotOptimize(dc3::static_gains(f));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_StaticGains)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

void BM_GreedySelect(benchmark::State& state) {
  const auto f = random_features(static_cast<std::size_t>(state.range(0)), 64);
  dc3::KMeansOptions options;
  options.bins = 10;
  const auto part = dc3::kmeans_partition(f, options, "c");
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        dc3::select_per_class(f, part, 50, dc3::SelectionMode::Greedy));
  }
}
BENCHMARK(BM_GreedySelect)->Arg(1300);

void BM_Colorfulness(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const auto image = dc3::synthetic_image(side, side, 0.3, 1);
  for (auto _ : state) benchmark::DoNotOptimize(dc3::colorfulness(image));
  state.SetBytesProcessed(state.iterations() * static_cast<int64_t>(image.pixels.size()));
}
BENCHMARK(BM_Colorfulness)->Arg(32)->Arg(224);

void BM_KdeFromHistogram(benchmark::State& state) {
  dc3::PixelHistogram histogram;
  histogram.add(dc3::synthetic_image(224, 224, 0.3, 2));
  for (auto _ : state) benchmark::DoNotOptimize(dc3::kde_from_histogram(histogram));
}
BENCHMARK(BM_KdeFromHistogram);

void BM_Stitch(benchmark::State& state) {
  const std::vector<dc3::Raster> variants = {dc3::synthetic_image(224, 224, 0.3, 3),
                                             dc3::synthetic_image(224, 224, 0.3, 4)};
  const auto strategy = state.range(0) == 0 ? dc3::StitchStrategy::half2()
                                            : dc3::StitchStrategy::pixels(0.5);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(dc3::stitch(variants, strategy, seed++));
}
BENCHMARK(BM_Stitch)->Arg(0)->Arg(1);

}  // namespace

BENCHMARK_MAIN();
