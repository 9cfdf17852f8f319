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
#include "dc3/sampler.hpp"

#include <algorithm>
#include <numeric>

#include "dc3/error.hpp"

namespace dc3 {
namespace {

double row_distance(const FeatureMatrix& f, std::size_t a, std::size_t b) {
  const auto ra = f.row(a);
  const auto rb = f.row(b);
  double sum = 0.0;
  for (std::size_t d = 0; d < ra.size(); ++d) {
    const double delta = static_cast<double>(ra[d]) - rb[d];
    sum += delta * delta;
  }
  return sum;
}

// Pairwise squared distances, symmetric, zero diagonal.
std::vector<double> distance_table(const FeatureMatrix& f) {
  const std::size_t n = f.count();
  std::vector<double> table(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      table[i * n + j] = table[j * n + i] = row_distance(f, i, j);
    }
  }
  return table;
}

// Picks `quota` members of one bin. `local` holds the bin's features.
void select_in_bin(const FeatureMatrix& local,
                   std::span<const std::size_t> members, std::size_t bin,
                   std::size_t quota, SelectionMode mode,
                   SelectionResult& out) {
  if (quota == 0) return;
  const std::size_t n = local.count();
  if (mode == SelectionMode::Static) {
    const auto gain = static_gains(local).gains;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    // members are ascending, so local order is sample-index order.
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return gain[a] > gain[b]; });
    for (std::size_t k = 0; k < quota; ++k) {
      out.selected.push_back(members[order[k]]);
      out.bin_of.push_back(bin);
      out.gains.push_back(gain[order[k]]);
    }
    return;
  }

  const auto dist = distance_table(local);
  // Greedy: to_selected[i] = sum over S, to_rest[i] = sum over D \ S \ {i}.
  std::vector<double> to_selected(n, 0.0);
  std::vector<double> to_rest(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) to_rest[i] += dist[i * n + j];
  }
  std::vector<bool> taken(n, false);
  for (std::size_t k = 0; k < quota; ++k) {
    std::size_t best = n;
    double best_gain = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      const double g = to_selected[i] - to_rest[i];
      if (best == n || g > best_gain) {
        best = i;
        best_gain = g;
      }
    }
    taken[best] = true;
    out.selected.push_back(members[best]);
    out.bin_of.push_back(bin);
    out.gains.push_back(best_gain);
    for (std::size_t i = 0; i < n; ++i) {
      to_selected[i] += dist[i * n + best];
      to_rest[i] -= dist[i * n + best];
    }
  }
}

}  // namespace

std::string_view to_string(SelectionMode mode) {
  return mode == SelectionMode::Static ? "static" : "greedy";
}

SelectionMode parse_selection_mode(std::string_view text) {
  if (text == "static") return SelectionMode::Static;
  if (text == "greedy") return SelectionMode::Greedy;
  throw Error(ErrorCode::ConfigInvalid, "mode must be static or greedy, got " +
                                            std::string(text));
}

GainTable static_gains(const FeatureMatrix& features, GainScope scope) {
  if (features.count() == 0) {
    throw Error(ErrorCode::EmptyInput, "static_gains needs at least one sample");
  }
  const std::size_t n = features.count();
  GainTable out{std::vector<double>(n, 0.0), scope};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = row_distance(features, i, j);
      out.gains[i] -= d;
      out.gains[j] -= d;
    }
  }
  return out;
}

double incremental_gain(std::size_t candidate,
                        std::span<const std::size_t> selected,
                        const FeatureMatrix& features) {
  if (candidate >= features.count()) {
    throw Error(ErrorCode::EmptyInput, "candidate " + std::to_string(candidate) +
                                           " out of range");
  }
  std::vector<bool> in_s(features.count(), false);
  for (auto s : selected) {
    if (s >= features.count()) {
      throw Error(ErrorCode::EmptyInput, "selected index " + std::to_string(s) +
                                             " out of range");
    }
    in_s[s] = true;
  }
  if (in_s[candidate]) {
    throw Error(ErrorCode::CandidateAlreadySelected, std::to_string(candidate));
  }
  double gain = 0.0;
  for (std::size_t p = 0; p < features.count(); ++p) {
    if (p == candidate) continue;
    const double d = row_distance(features, p, candidate);
    gain += in_s[p] ? d : -d;
  }
  return gain;
}

std::vector<std::size_t> bin_quotas(std::span<const std::size_t> bin_sizes,
                                    std::size_t budget) {
  const std::size_t m = bin_sizes.size();
  std::vector<std::size_t> quota(m, 0);
  if (m == 0) return quota;
  const std::size_t total = std::accumulate(bin_sizes.begin(), bin_sizes.end(),
                                            std::size_t{0});
  budget = std::min(budget, total);

  // Largest bins first, lowest index on ties.
  std::vector<std::size_t> by_size(m);
  std::iota(by_size.begin(), by_size.end(), 0);
  std::stable_sort(by_size.begin(), by_size.end(), [&](std::size_t a, std::size_t b) {
    return bin_sizes[a] > bin_sizes[b];
  });

  const std::size_t base = budget / m;
  std::size_t remainder = budget % m;
  std::size_t placed = 0;
  for (std::size_t j : by_size) {
    std::size_t want = base;
    if (remainder > 0) {
      ++want;
      --remainder;
    }
    quota[j] = std::min(want, bin_sizes[j]);
    placed += quota[j];
  }
  // Shortfall cascades, one at a time, around the size order.
  while (placed < budget) {
    for (std::size_t j : by_size) {
      if (placed == budget) break;
      if (quota[j] < bin_sizes[j]) {
        ++quota[j];
        ++placed;
      }
    }
  }
  return quota;
}

SelectionResult select_per_class(const FeatureMatrix& class_features,
                                 const BinPartition& bins, std::size_t ipc,
                                 SelectionMode mode) {
  if (ipc == 0) throw Error(ErrorCode::ConfigInvalid, "ipc must be positive");
  if (bins.assignment.size() != class_features.count()) {
    throw Error(ErrorCode::DimensionMismatch,
                "partition covers " + std::to_string(bins.assignment.size()) +
                    " samples, features have " +
                    std::to_string(class_features.count()));
  }
  SelectionResult out;
  out.class_label = bins.class_label;
  out.mode = mode;
  const auto members = bins.members();
  const auto sizes = bins.bin_sizes();
  out.per_bin_quota = bin_quotas(sizes, ipc);
  for (std::size_t j = 0; j < bins.bins; ++j) {
    const FeatureMatrix local = class_features.gather(members[j]);
    select_in_bin(local, members[j], j, out.per_bin_quota[j], mode, out);
  }
  return out;
}

std::size_t effective_bins(std::size_t bins, std::size_t ipc,
                           std::size_t class_size) {
  const std::size_t m = ipc <= bins ? ipc : bins;
  return std::min(m, class_size);
}

ClassSelection quantize_and_select(const FeatureMatrix& class_features,
                                   std::string class_label,
                                   const KMeansOptions& kmeans,
                                   std::size_t ipc, SelectionMode mode) {
  if (ipc == 0) throw Error(ErrorCode::ConfigInvalid, "ipc must be positive");
  KMeansOptions options = kmeans;
  if (ipc <= options.bins) options.bins = ipc;
  ClassSelection out;
  out.partition = kmeans_partition(class_features, options, std::move(class_label));
  out.selection = select_per_class(class_features, out.partition, ipc, mode);
  return out;
}

}  // namespace dc3
