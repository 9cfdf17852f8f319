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
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "dc3/compensator.hpp"
#include "dc3/sampler.hpp"
#include "dc3/stitcher.hpp"

namespace dc3 {

enum class BackendKind { Fallback, Http };

struct PipelineConfig {
  std::size_t ipc = 10;
  std::size_t bins = 10;
  std::uint64_t seed = 0;
  SelectionMode mode = SelectionMode::Static;
  StitchStrategy stitch = StitchStrategy::half2();
  BackendKind backend = BackendKind::Fallback;
  std::string endpoint;
  double guidance_scale = kDefaultGuidanceScale;
  int variants = 2;
  std::size_t max_iters = 100;
  double tol = 1e-6;
  std::size_t max_in_flight = 4;

  // Throws ConfigInvalid naming the first bad field.
  void validate() const;

  nlohmann::ordered_json to_json() const;
  // Fields present in `doc` override those of `base`.
  static PipelineConfig from_json(const nlohmann::json& doc,
                                  const PipelineConfig& base);
  static PipelineConfig from_json(const nlohmann::json& doc);
};

std::unique_ptr<CompensationBackend> make_backend(const PipelineConfig& config);

// Artifact layout inside an output directory.
namespace layout {
inline constexpr std::string_view kConfig = "config.json";
inline constexpr std::string_view kBinsDir = "bins";
inline constexpr std::string_view kSelectionDir = "selection";
inline constexpr std::string_view kCompensatedDir = "compensated";
inline constexpr std::string_view kCompensationLog = "compensation.json";
inline constexpr std::string_view kImagesDir = "images";
inline constexpr std::string_view kCondensed = "condensed.json";
inline constexpr std::string_view kMetrics = "metrics.json";
inline constexpr std::string_view kKdeCsv = "kde.csv";
}  // namespace layout

// Path-safe spelling of a label or id: [A-Za-z0-9._-] kept, other bytes
// become %XX.
std::string safe_name(std::string_view text);

struct CondensedEntry {
  std::string output;  // relative to the output directory
  std::string source_id;
  std::string class_label;
  std::size_t bin = 0;
  double gain = 0.0;
  std::vector<std::string> cool_prompts;
  std::vector<std::string> warm_prompts;
  std::uint64_t image_seed = 0;
  std::uint64_t stitch_seed = 0;
};

struct CondensedManifest {
  nlohmann::ordered_json config;
  std::string backend;
  std::string stitch;
  std::vector<CondensedEntry> entries;
  nlohmann::ordered_json metrics;  // null until the metrics stage ran

  nlohmann::ordered_json to_json() const;
  static CondensedManifest from_json(const nlohmann::json& doc);
};

CondensedManifest load_condensed_manifest(const std::filesystem::path& out_dir);

// Checks per-class counts against the dataset and that every output image
// exists and decodes. Throws InvalidManifest on the first violation.
void validate_condensed(const std::filesystem::path& dataset_dir,
                        const std::filesystem::path& out_dir);

// Stage entry points. Each reads earlier artifacts from `out_dir`, writes
// its own into a staging directory and moves them into `out_dir` only
// once the stage succeeded. Errors come back as StageError.
void stage_quantize(const PipelineConfig& config,
                    const std::filesystem::path& dataset_dir,
                    const std::filesystem::path& out_dir);
void stage_sample(const std::filesystem::path& dataset_dir,
                  const std::filesystem::path& out_dir);
// `backend` overrides the one the frozen config describes (tests use this).
void stage_compensate(const std::filesystem::path& dataset_dir,
                      const std::filesystem::path& out_dir,
                      CompensationBackend* backend = nullptr);
void stage_stitch(const std::filesystem::path& dataset_dir,
                  const std::filesystem::path& out_dir);
void stage_metrics(const std::filesystem::path& dataset_dir,
                   const std::filesystem::path& out_dir);

// All stages in order into a fresh staging directory that is renamed to
// `out_dir` on success and deleted on failure. `out_dir` must be absent
// or empty.
CondensedManifest run(const PipelineConfig& config,
                      const std::filesystem::path& dataset_dir,
                      const std::filesystem::path& out_dir,
                      CompensationBackend* backend = nullptr);

}  // namespace dc3
