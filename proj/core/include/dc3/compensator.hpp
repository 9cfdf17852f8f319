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
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "dc3/raster.hpp"

namespace dc3 {

enum class HueFamily { Cool, Warm };

std::string_view to_string(HueFamily family);

struct HuePrompt {
  std::string text;
  HueFamily family = HueFamily::Cool;

  friend bool operator==(const HuePrompt&, const HuePrompt&) = default;
};

// Five cool and five warm instruction prompts.
const std::vector<HuePrompt>& default_catalog();

struct PromptPair {
  HuePrompt cool;
  HuePrompt warm;
};

// One prompt per family. The first draw of the seeded stream picks the cool
// prompt and the second picks the warm one.
PromptPair pick_prompts(std::span<const HuePrompt> catalog, std::uint64_t seed);

inline constexpr double kDefaultGuidanceScale = 4.0;

struct CompensationRequest {
  Raster image;
  HuePrompt prompt;
  std::uint64_t seed = 0;
  double guidance_scale = kDefaultGuidanceScale;
};

struct BackendReply {
  Raster image;
  // Parameters the backend reports about itself (model id, steps, ...).
  nlohmann::ordered_json info = nlohmann::ordered_json::object();
};

// Implementations must allow concurrent calls to run().
class CompensationBackend {
 public:
  virtual ~CompensationBackend() = default;
  virtual std::string name() const = 0;
  // Throws Error(BackendUnreachable) when the backend cannot serve.
  virtual void check_health() = 0;
  virtual BackendReply run(const CompensationRequest& request) = 0;
};

// Per-channel gains: cool (0.85, 0.95, 1.15), warm (1.15, 1.05, 0.85).
// Values are rounded half-to-even and clamped to [0, 255].
Raster fallback_transform(const Raster& image, HueFamily family);

// Deterministic white-balance shift standing in for a diffusion service.
class FallbackBackend final : public CompensationBackend {
 public:
  std::string name() const override { return "fallback"; }
  void check_health() override {}
  BackendReply run(const CompensationRequest& request) override;
};

// Runs the backend and checks the returned raster keeps the input size.
BackendReply compensate_with_info(const CompensationRequest& request,
                                  CompensationBackend& backend);
Raster compensate(const CompensationRequest& request,
                  CompensationBackend& backend);

struct CompensationProvenance {
  std::string source_id;
  HuePrompt cool_prompt;
  HuePrompt warm_prompt;
  std::uint64_t seed = 0;
  std::uint64_t cool_seed = 0;
  std::uint64_t warm_seed = 0;
  double guidance_scale = kDefaultGuidanceScale;
  std::string backend;
  nlohmann::ordered_json cool_info;
  nlohmann::ordered_json warm_info;

  nlohmann::ordered_json to_json() const;
};

struct CompensatedPair {
  Raster cool;
  Raster warm;
  CompensationProvenance provenance;
};

// Sub-seeds: seed ^ 1 for the cool request, seed ^ 2 for the warm one.
CompensatedPair compensate_pair(std::string source_id, const Raster& image,
                                std::span<const HuePrompt> catalog,
                                std::uint64_t seed, double guidance_scale,
                                CompensationBackend& backend);

struct CompensationJob {
  std::string source_id;
  const Raster* image = nullptr;
  std::uint64_t seed = 0;
};

// Runs compensate_pair over all jobs with at most `max_in_flight` calls
// outstanding. Results come back in job order. If any job fails, the error
// of the lowest-index failing job is rethrown after in-flight calls drain.
std::vector<CompensatedPair> compensate_all(std::span<const CompensationJob> jobs,
                                            std::span<const HuePrompt> catalog,
                                            double guidance_scale,
                                            CompensationBackend& backend,
                                            std::size_t max_in_flight);

}  // namespace dc3
