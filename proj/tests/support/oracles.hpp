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

// Brute-force reference implementations used only by tests. They work on
// plain nested vectors in long double and share no code with dc3::core.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

namespace dc3::oracle {

using Point = std::vector<double>;

inline long double sq_dist(const Point& a, const Point& b) {
  long double s = 0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    const long double t = static_cast<long double>(a[d]) - b[d];
    s += t * t;
  }
  return s;
}

// Graph-cut gain from scratch: sum over S minus sum over D \ S \ {x}.
inline long double graphcut_gain(const std::vector<Point>& pts, std::size_t x,
                                 const std::vector<bool>& in_s) {
  long double g = 0;
  for (std::size_t p = 0; p < pts.size(); ++p) {
    if (p == x) continue;
    g += in_s[p] ? sq_dist(pts[p], pts[x]) : -sq_dist(pts[p], pts[x]);
  }
  return g;
}

inline std::vector<long double> static_gains(const std::vector<Point>& pts) {
  std::vector<bool> none(pts.size(), false);
  std::vector<long double> g;
  for (std::size_t i = 0; i < pts.size(); ++i) g.push_back(graphcut_gain(pts, i, none));
  return g;
}

// Exhaustive: the k-subset with the largest total static gain; among equal
// totals the lexicographically smallest index set. Returned sorted.
inline std::vector<std::size_t> best_static_subset(const std::vector<Point>& pts,
                                                   std::size_t k) {
  const auto g = static_gains(pts);
  const std::size_t n = pts.size();
  std::vector<std::size_t> best;
  long double best_sum = -std::numeric_limits<long double>::infinity();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != k) continue;
    std::vector<std::size_t> subset;
    long double sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        subset.push_back(i);
        sum += g[i];
      }
    }
    if (sum > best_sum || (sum == best_sum && subset < best)) {
      best_sum = sum;
      best = subset;
    }
  }
  return best;
}

// Greedy that re-evaluates the gain from scratch at every step.
inline std::vector<std::size_t> greedy_sequence(const std::vector<Point>& pts,
                                                std::size_t k) {
  std::vector<bool> in_s(pts.size(), false);
  std::vector<std::size_t> order;
  for (std::size_t step = 0; step < k; ++step) {
    std::size_t best = pts.size();
    long double best_gain = 0;
    for (std::size_t x = 0; x < pts.size(); ++x) {
      if (in_s[x]) continue;
      const long double g = graphcut_gain(pts, x, in_s);
      if (best == pts.size() || g > best_gain) {
        best = x;
        best_gain = g;
      }
    }
    in_s[best] = true;
    order.push_back(best);
  }
  return order;
}

// Exhaustive 2-partition of 1-D points minimizing within-group squared error.
struct TwoPartition {
  std::vector<std::size_t> group_of;
  double centroids[2];
  long double inertia;
};

inline TwoPartition best_two_partition(const std::vector<double>& xs) {
  TwoPartition best{{}, {0, 0}, std::numeric_limits<long double>::infinity()};
  const std::size_t n = xs.size();
  for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
    long double sum[2] = {0, 0};
    std::size_t cnt[2] = {0, 0};
    for (std::size_t i = 0; i < n; ++i) {
      const int g = (mask >> i) & 1u;
      sum[g] += xs[i];
      ++cnt[g];
    }
    const long double mean[2] = {sum[0] / cnt[0], sum[1] / cnt[1]};
    long double inertia = 0;
    std::vector<std::size_t> group(n);
    for (std::size_t i = 0; i < n; ++i) {
      group[i] = (mask >> i) & 1u;
      inertia += (xs[i] - mean[group[i]]) * (xs[i] - mean[group[i]]);
    }
    if (inertia < best.inertia) {
      best = {group, {double(mean[0]), double(mean[1])}, inertia};
    }
  }
  return best;
}

// Colorfulness evaluated pixel by pixel from explicit rg / yb vectors.
struct ColorfulnessParts {
  long double sigma_rg, sigma_yb, mu_rg, mu_yb, score;
};

inline ColorfulnessParts colorfulness(const std::vector<std::uint8_t>& rgb) {
  std::vector<long double> rg, yb;
  for (std::size_t i = 0; i + 2 < rgb.size(); i += 3) {
    const long double r = rgb[i], g = rgb[i + 1], b = rgb[i + 2];
    rg.push_back(std::fabs(r - g));
    yb.push_back(0.5L * (r + g) - b);
  }
  auto mean = [](const std::vector<long double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0L) / v.size();
  };
  auto pstd = [&](const std::vector<long double>& v) {
    const long double m = mean(v);
    long double ss = 0;
    for (auto x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / v.size());
  };
  ColorfulnessParts p;
  p.mu_rg = mean(rg);
  p.mu_yb = mean(yb);
  p.sigma_rg = pstd(rg);
  p.sigma_yb = pstd(yb);
  p.score = std::sqrt(p.sigma_rg * p.sigma_rg + p.sigma_yb * p.sigma_yb) +
            0.3L * std::sqrt(p.mu_rg * p.mu_rg + p.mu_yb * p.mu_yb);
  return p;
}

inline double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
  long double s = 0;
  for (std::size_t i = 1; i < x.size(); ++i) s += (y[i] + y[i - 1]) * (x[i] - x[i - 1]) / 2;
  return static_cast<double>(s);
}

}  // namespace dc3::oracle
