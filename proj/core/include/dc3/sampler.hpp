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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dc3/catalog.hpp"
#include "dc3/quantizer.hpp"

namespace dc3 {

// Which reference set D the GraphCut gains were computed against.
enum class GainScope { Bin, Class };

struct GainTable {
  std::vector<double> gains;
  GainScope scope = GainScope::Bin;
};

enum class SelectionMode { Static, Greedy };

std::string_view to_string(SelectionMode mode);
SelectionMode parse_selection_mode(std::string_view text);

struct SelectionResult {
  std::string class_label;
  SelectionMode mode = SelectionMode::Static;
  // Class-local sample indices, grouped by bin in ascending bin order and
  // in pick order inside each bin.
  std::vector<std::size_t> selected;
  std::vector<std::size_t> bin_of;  // bin index of each selected sample
  std::vector<double> gains;        // gain at the time each sample was picked
  std::vector<std::size_t> per_bin_quota;

  friend bool operator==(const SelectionResult&, const SelectionResult&) = default;
};

// Gain of every sample with nothing selected yet:
//   G(x) = -sum_{p in D, p != x} ||f(p) - f(x)||^2
GainTable static_gains(const FeatureMatrix& features,
                       GainScope scope = GainScope::Bin);

// Gain of `candidate` given the already selected set S, with D = all rows:
//   sum_{p in S} ||f(p) - f(x)||^2 - sum_{p in D \ S, p != x} ||f(p) - f(x)||^2
double incremental_gain(std::size_t candidate,
                        std::span<const std::size_t> selected,
                        const FeatureMatrix& features);

// Per-bin budget for `budget` picks: floor(budget / M) each, the remainder
// one-each to the largest bins (lowest index on ties), and any bin's
// shortfall passed on to the next-largest bins with room left.
std::vector<std::size_t> bin_quotas(std::span<const std::size_t> bin_sizes,
                                    std::size_t budget);

// Selects min(N, class size) samples from a partitioned class. Gains are
// bin-local. Ties always go to the lower sample index.
SelectionResult select_per_class(const FeatureMatrix& class_features,
                                 const BinPartition& bins, std::size_t ipc,
                                 SelectionMode mode);

// Clusters then selects. When ipc <= bins the class is re-clustered with
// M = ipc so each bin contributes one sample.
struct ClassSelection {
  BinPartition partition;
  SelectionResult selection;
};
ClassSelection quantize_and_select(const FeatureMatrix& class_features,
                                   std::string class_label,
                                   const KMeansOptions& kmeans,
                                   std::size_t ipc, SelectionMode mode);

// Bin count actually used for a class of `class_size` samples.
std::size_t effective_bins(std::size_t bins, std::size_t ipc,
                           std::size_t class_size);

}  // namespace dc3
