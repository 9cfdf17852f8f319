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
#include "dc3/compensator.hpp"

#include <algorithm>
#include <cmath>

#include "dc3/error.hpp"
#include "dc3/rng.hpp"
#include "parallel.hpp"

namespace dc3 {
namespace {

struct ChannelGains {
  double r, g, b;
};

constexpr ChannelGains kCoolGains{0.85, 0.95, 1.15};
constexpr ChannelGains kWarmGains{1.15, 1.05, 0.85};

std::uint8_t scale_channel(std::uint8_t v, double gain) {
  // nearbyint honours the default round-to-nearest-even mode.
  const double scaled = std::nearbyint(static_cast<double>(v) * gain);
  return static_cast<std::uint8_t>(std::clamp(scaled, 0.0, 255.0));
}

void validate(const CompensationRequest& request) {
  if (request.image.empty()) {
    throw Error(ErrorCode::EmptyImage, "compensation input has no pixels");
  }
  if (request.prompt.text.empty()) {
    throw Error(ErrorCode::ConfigInvalid, "hue prompt text is empty");
  }
  if (!(request.guidance_scale > 0.0)) {
    throw Error(ErrorCode::ConfigInvalid, "guidance scale must be positive");
  }
}

}  // namespace

std::string_view to_string(HueFamily family) {
  return family == HueFamily::Cool ? "cool" : "warm";
}

const std::vector<HuePrompt>& default_catalog() {
  static const std::vector<HuePrompt> catalog = {
      {"rainy", HueFamily::Cool},      {"snowy", HueFamily::Cool},
      {"infrared", HueFamily::Cool},   {"underwater", HueFamily::Cool},
      {"frozen lake", HueFamily::Cool}, {"sepia", HueFamily::Warm},
      {"sunny", HueFamily::Warm},      {"daylight", HueFamily::Warm},
      {"vivid colors", HueFamily::Warm}, {"golden hour", HueFamily::Warm},
  };
  return catalog;
}

PromptPair pick_prompts(std::span<const HuePrompt> catalog, std::uint64_t seed) {
  std::vector<const HuePrompt*> cool;
  std::vector<const HuePrompt*> warm;
  for (const auto& p : catalog) {
    (p.family == HueFamily::Cool ? cool : warm).push_back(&p);
  }
  if (cool.empty()) throw Error(ErrorCode::EmptyFamily, "cool");
  if (warm.empty()) throw Error(ErrorCode::EmptyFamily, "warm");
  SplitMix64 rng(seed);
  const auto& c = *cool[rng.next_below(cool.size())];
  const auto& w = *warm[rng.next_below(warm.size())];
  return {c, w};
}

Raster fallback_transform(const Raster& image, HueFamily family) {
  const ChannelGains& k = family == HueFamily::Cool ? kCoolGains : kWarmGains;
  Raster out = image;
  for (std::size_t i = 0; i < out.pixels.size(); i += 3) {
    out.pixels[i] = scale_channel(out.pixels[i], k.r);
    out.pixels[i + 1] = scale_channel(out.pixels[i + 1], k.g);
    out.pixels[i + 2] = scale_channel(out.pixels[i + 2], k.b);
  }
  return out;
}

BackendReply FallbackBackend::run(const CompensationRequest& request) {
  BackendReply reply;
  reply.image = fallback_transform(request.image, request.prompt.family);
  reply.info["transform"] = "channel-gain";
  return reply;
}

BackendReply compensate_with_info(const CompensationRequest& request,
                                  CompensationBackend& backend) {
  validate(request);
  BackendReply reply = backend.run(request);
  if (!reply.image.same_size(request.image)) {
    throw Error(ErrorCode::DimensionMismatch,
                backend.name() + " returned " + std::to_string(reply.image.width) +
                    "x" + std::to_string(reply.image.height) + " for a " +
                    std::to_string(request.image.width) + "x" +
                    std::to_string(request.image.height) + " input");
  }
  return reply;
}

Raster compensate(const CompensationRequest& request,
                  CompensationBackend& backend) {
  return compensate_with_info(request, backend).image;
}

nlohmann::ordered_json CompensationProvenance::to_json() const {
  nlohmann::ordered_json j;
  j["source_id"] = source_id;
  j["cool_prompt"] = cool_prompt.text;
  j["warm_prompt"] = warm_prompt.text;
  j["seed"] = seed;
  j["cool_seed"] = cool_seed;
  j["warm_seed"] = warm_seed;
  j["guidance_scale"] = guidance_scale;
  j["backend"] = backend;
  j["cool_info"] = cool_info;
  j["warm_info"] = warm_info;
  return j;
}

CompensatedPair compensate_pair(std::string source_id, const Raster& image,
                                std::span<const HuePrompt> catalog,
                                std::uint64_t seed, double guidance_scale,
                                CompensationBackend& backend) {
  const PromptPair prompts = pick_prompts(catalog, seed);
  CompensatedPair out;
  auto& prov = out.provenance;
  prov.source_id = std::move(source_id);
  prov.cool_prompt = prompts.cool;
  prov.warm_prompt = prompts.warm;
  prov.seed = seed;
  prov.cool_seed = seed ^ 1u;
  prov.warm_seed = seed ^ 2u;
  prov.guidance_scale = guidance_scale;
  prov.backend = backend.name();

  CompensationRequest request{image, prompts.cool, prov.cool_seed, guidance_scale};
  BackendReply cool = compensate_with_info(request, backend);
  request.prompt = prompts.warm;
  request.seed = prov.warm_seed;
  BackendReply warm = compensate_with_info(request, backend);

  out.cool = std::move(cool.image);
  out.warm = std::move(warm.image);
  prov.cool_info = std::move(cool.info);
  prov.warm_info = std::move(warm.info);
  return out;
}

std::vector<CompensatedPair> compensate_all(std::span<const CompensationJob> jobs,
                                            std::span<const HuePrompt> catalog,
                                            double guidance_scale,
                                            CompensationBackend& backend,
                                            std::size_t max_in_flight) {
  return detail::parallel_map(jobs.size(), max_in_flight, [&](std::size_t i) {
    return compensate_pair(jobs[i].source_id, *jobs[i].image, catalog,
                           jobs[i].seed, guidance_scale, backend);
  });
}

}  // namespace dc3
