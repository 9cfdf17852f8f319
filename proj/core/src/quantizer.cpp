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
#include "dc3/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dc3/error.hpp"
#include "dc3/rng.hpp"

namespace dc3 {
namespace {

constexpr std::size_t kUnassigned = std::numeric_limits<std::size_t>::max();

class Lloyd {
 public:
  Lloyd(const FeatureMatrix& features, std::size_t bins)
      : x_(features),
        bins_(bins),
        dim_(features.dim()),
        centroids_(bins * features.dim(), 0.0),
        labels_(features.count(), kUnassigned) {}

  void seed_plus_plus(std::uint64_t seed) {
    SplitMix64 rng(seed);
    const std::size_t n = x_.count();
    std::vector<bool> chosen(n, false);
    std::vector<double> d2(n, std::numeric_limits<double>::infinity());

    std::size_t pick = rng.next_below(n);
    for (std::size_t c = 0;; ++c) {
      chosen[pick] = true;
      const auto src = x_.row(pick);
      std::copy(src.begin(), src.end(), centroids_.begin() + c * dim_);
      if (c + 1 == bins_) break;

      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        d2[i] = std::min(d2[i], squared_distance(x_.row(i), centroid(c)));
        total += d2[i];
      }
      pick = kUnassigned;
      if (total > 0.0) {
        const double target = rng.next_double() * total;
        double cumulative = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (d2[i] <= 0.0) continue;
          cumulative += d2[i];
          pick = i;
          if (cumulative > target) break;
        }
      } else {
        // Every point coincides with a centroid: take the first unused one.
        for (std::size_t i = 0; i < n && pick == kUnassigned; ++i) {
          if (!chosen[i]) pick = i;
        }
      }
    }
  }

  // Returns true if any label changed.
  bool assign_all() {
    bool changed = false;
    for (std::size_t i = 0; i < x_.count(); ++i) {
      const std::size_t j = assign(x_.row(i), centroids_, dim_);
      // A point tied between its current bin and a lower one stays put, so
      // coincident points do not collapse back into a single bin.
      if (j != labels_[i] && labels_[i] != kUnassigned &&
          squared_distance(x_.row(i), centroid(labels_[i])) ==
              squared_distance(x_.row(i), centroid(j))) {
        continue;
      }
      if (j != labels_[i]) {
        labels_[i] = j;
        changed = true;
      }
    }
    return changed;
  }

  bool has_empty_bin() const {
    const auto sizes = bin_sizes();
    return std::find(sizes.begin(), sizes.end(), 0u) != sizes.end();
  }

  // Moves the point farthest from its centroid (taken from a bin with at
  // least two members) into each empty bin. Returns true if anything moved.
  bool repair_empty_bins() {
    auto sizes = bin_sizes();
    bool repaired = false;
    for (std::size_t j = 0; j < bins_; ++j) {
      if (sizes[j] != 0) continue;
      std::size_t far = kUnassigned;
      double far_d2 = -1.0;
      for (std::size_t i = 0; i < x_.count(); ++i) {
        if (sizes[labels_[i]] < 2) continue;
        const double d = squared_distance(x_.row(i), centroid(labels_[i]));
        if (d > far_d2) {
          far_d2 = d;
          far = i;
        }
      }
      --sizes[labels_[far]];
      ++sizes[j];
      labels_[far] = j;
      const auto src = x_.row(far);
      std::copy(src.begin(), src.end(), centroids_.begin() + j * dim_);
      repaired = true;
    }
    return repaired;
  }

  // Recomputes centroids as bin means; returns the largest centroid shift.
  double update_centroids() {
    std::vector<double> sums(bins_ * dim_, 0.0);
    std::vector<std::size_t> counts(bins_, 0);
    for (std::size_t i = 0; i < x_.count(); ++i) {
      const auto row = x_.row(i);
      double* acc = sums.data() + labels_[i] * dim_;
      for (std::size_t d = 0; d < dim_; ++d) acc[d] += row[d];
      ++counts[labels_[i]];
    }
    double max_shift = 0.0;
    for (std::size_t j = 0; j < bins_; ++j) {
      if (counts[j] == 0) continue;
      double shift2 = 0.0;
      for (std::size_t d = 0; d < dim_; ++d) {
        const double mean = sums[j * dim_ + d] / static_cast<double>(counts[j]);
        const double delta = mean - centroids_[j * dim_ + d];
        shift2 += delta * delta;
        centroids_[j * dim_ + d] = mean;
      }
      max_shift = std::max(max_shift, std::sqrt(shift2));
    }
    return max_shift;
  }

  double inertia() const {
    double total = 0.0;
    for (std::size_t i = 0; i < x_.count(); ++i) {
      total += squared_distance(x_.row(i), centroid(labels_[i]));
    }
    return total;
  }

  std::vector<std::size_t> bin_sizes() const {
    std::vector<std::size_t> sizes(bins_, 0);
    for (auto l : labels_) {
      if (l != kUnassigned) ++sizes[l];
    }
    return sizes;
  }

  std::span<const double> centroid(std::size_t j) const {
    return {centroids_.data() + j * dim_, dim_};
  }

  std::vector<double>& centroids() { return centroids_; }
  std::vector<std::size_t>& labels() { return labels_; }

 private:
  const FeatureMatrix& x_;
  std::size_t bins_;
  std::size_t dim_;
  std::vector<double> centroids_;
  std::vector<std::size_t> labels_;
};

}  // namespace

std::vector<std::size_t> BinPartition::bin_sizes() const {
  std::vector<std::size_t> sizes(bins, 0);
  for (auto a : assignment) ++sizes[a];
  return sizes;
}

std::vector<std::vector<std::size_t>> BinPartition::members() const {
  std::vector<std::vector<std::size_t>> out(bins);
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    out[assignment[i]].push_back(i);
  }
  return out;
}

double squared_distance(std::span<const float> point,
                        std::span<const double> centroid) noexcept {
  double sum = 0.0;
  for (std::size_t d = 0; d < point.size(); ++d) {
    const double delta = static_cast<double>(point[d]) - centroid[d];
    sum += delta * delta;
  }
  return sum;
}

std::size_t assign(std::span<const float> point,
                   std::span<const double> centroids, std::size_t dim) {
  if (dim == 0 || point.size() != dim || centroids.empty() ||
      centroids.size() % dim != 0) {
    throw Error(ErrorCode::DimensionMismatch,
                "point has " + std::to_string(point.size()) +
                    " values, centroids have dim " + std::to_string(dim));
  }
  const std::size_t m = centroids.size() / dim;
  std::size_t best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < m; ++j) {
    const double d2 = squared_distance(point, centroids.subspan(j * dim, dim));
    if (d2 < best_d2) {
      best_d2 = d2;
      best = j;
    }
  }
  return best;
}

BinPartition kmeans_partition(const FeatureMatrix& features,
                              const KMeansOptions& options,
                              std::string class_label) {
  if (features.count() == 0 || features.dim() == 0) {
    throw Error(ErrorCode::EmptyInput, "k-means needs at least one sample");
  }
  if (options.bins == 0) {
    throw Error(ErrorCode::ConfigInvalid, "bins must be positive");
  }
  if (options.max_iters == 0) {
    throw Error(ErrorCode::ConfigInvalid, "max_iters must be positive");
  }

  BinPartition out;
  out.class_label = std::move(class_label);
  out.bins = std::min(options.bins, features.count());
  out.dim = features.dim();

  Lloyd lloyd(features, out.bins);
  lloyd.seed_plus_plus(options.seed);

  while (out.iterations < options.max_iters) {
    const bool changed = lloyd.assign_all();
    const bool repaired = lloyd.repair_empty_bins();
    if (!changed && !repaired) {
      out.converged = true;
      break;
    }
    const double shift = lloyd.update_centroids();
    out.inertia_history.push_back(lloyd.inertia());
    ++out.iterations;
    if (shift <= options.tol) {
      // Final labelling against the stored centroids, so every label is
      // its argmin even if centroids moved by less than tol.
      if (lloyd.assign_all() && !lloyd.has_empty_bin()) {
        out.inertia_history.push_back(lloyd.inertia());
      }
      if (!lloyd.has_empty_bin()) {
        out.converged = true;
        break;
      }
    }
  }

  out.centroids = std::move(lloyd.centroids());
  out.assignment = std::move(lloyd.labels());
  out.inertia = 0.0;
  for (std::size_t i = 0; i < features.count(); ++i) {
    out.inertia += squared_distance(features.row(i), out.centroid(out.assignment[i]));
  }
  return out;
}

}  // namespace dc3
