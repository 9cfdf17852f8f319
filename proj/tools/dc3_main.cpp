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
#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <fmt/core.h>
#include <nlohmann/json.hpp>

#include "dc3/error.hpp"
#include "dc3/pipeline.hpp"
#include "dc3/synthetic.hpp"

namespace fs = std::filesystem;

namespace {

// Flags that map onto PipelineConfig fields. Unset flags leave the config
// file (or the defaults) in charge.
struct ConfigFlags {
  std::optional<std::size_t> ipc;
  std::optional<std::size_t> bins;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
  std::optional<std::string> stitch;
  std::optional<std::string> backend;
  std::optional<std::string> endpoint;
  std::optional<double> guidance_scale;
  std::optional<int> variants;
  std::optional<std::size_t> max_in_flight;
  std::string config_file;

  void add_to(CLI::App& app, bool ipc_required) {
    auto* ipc_opt = app.add_option("--ipc", ipc, "images per class (N)");
    if (ipc_required) ipc_opt->required();
    app.add_option("--bins", bins, "k-means bins per class (M), default 10");
    app.add_option("--seed", seed, "master seed, default 0");
    app.add_option("--mode", mode, "static | greedy")
        ->check(CLI::IsMember({"static", "greedy"}));
    app.add_option("--stitch", stitch, "half2 | quarter4 | pixels:F | grid:N");
    app.add_option("--backend", backend, "fallback | http")
        ->check(CLI::IsMember({"fallback", "http"}));
    app.add_option("--endpoint", endpoint, "model server URL for --backend http");
    app.add_option("--guidance-scale", guidance_scale, "diffusion guidance, default 4");
    app.add_option("--variants", variants, "compensated variants per image: 2 or 4")
        ->check(CLI::IsMember({2, 4}));
    app.add_option("--max-in-flight", max_in_flight,
                   "concurrent compensation requests, default 4");
    app.add_option("--config", config_file, "JSON config file")->check(CLI::ExistingFile);
  }

  dc3::PipelineConfig resolve() const {
    dc3::PipelineConfig config;
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw dc3::Error(dc3::ErrorCode::ConfigInvalid, config_file + ": " + e.what());
      }
      config = dc3::PipelineConfig::from_json(doc, config);
    }
    nlohmann::json overrides = nlohmann::json::object();
    if (ipc) overrides["ipc"] = *ipc;
    if (bins) overrides["bins"] = *bins;
    if (seed) overrides["seed"] = *seed;
    if (mode) overrides["mode"] = *mode;
    if (stitch) overrides["stitch"] = *stitch;
    if (backend) overrides["backend"] = *backend;
    if (endpoint) overrides["endpoint"] = *endpoint;
    if (guidance_scale) overrides["guidance_scale"] = *guidance_scale;
    if (variants) overrides["variants"] = *variants;
    if (max_in_flight) overrides["max_in_flight"] = *max_in_flight;
    config = dc3::PipelineConfig::from_json(overrides, config);
    config.validate();
    return config;
  }
};

struct Paths {
  std::string dataset;
  std::string out;

  void add_to(CLI::App& app, const char* out_help) {
    app.add_option("--dataset", dataset, "dataset directory holding manifest.json")
        ->required()
        ->check(CLI::ExistingDirectory);
    app.add_option("--out", out, out_help)->required();
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dc3: dataset condensation with color compensation"};
  app.require_subcommand(1);

  ConfigFlags run_flags;
  Paths run_paths;
  auto* run_cmd = app.add_subcommand("run", "all stages into a new output directory");
  run_paths.add_to(*run_cmd, "output directory (must be absent or empty)");
  run_flags.add_to(*run_cmd, false);

  ConfigFlags quantize_flags;
  Paths quantize_paths;
  auto* quantize_cmd =
      app.add_subcommand("quantize", "cluster each class into bins; freezes the config");
  quantize_paths.add_to(*quantize_cmd, "output directory");
  quantize_flags.add_to(*quantize_cmd, false);

  Paths sample_paths, compensate_paths, stitch_paths, metrics_paths;
  auto* sample_cmd = app.add_subcommand("sample", "select samples per bin");
  sample_paths.add_to(*sample_cmd, "output directory of a quantize run");
  auto* compensate_cmd =
      app.add_subcommand("compensate", "cool/warm hue compensation of selected images");
  compensate_paths.add_to(*compensate_cmd, "output directory of a sample run");
  auto* stitch_cmd = app.add_subcommand("stitch", "fuse compensated variants");
  stitch_paths.add_to(*stitch_cmd, "output directory of a compensate run");
  auto* metrics_cmd = app.add_subcommand(
      "metrics", "colorfulness, KDE curves and homogenization report");
  metrics_paths.add_to(*metrics_cmd, "condensed output directory");

  dc3::SyntheticSpec synth_spec;
  std::string synth_out;
  auto* synth_cmd = app.add_subcommand("synth", "write a synthetic dataset for demos");
  synth_cmd->add_option("--out", synth_out, "dataset directory to create")->required();
  synth_cmd->add_option("--per-class", synth_spec.per_class, "samples per class, default 30");
  synth_cmd->add_option("--size", synth_spec.width, "image width and height, default 32");
  synth_cmd->add_option("--seed", synth_spec.seed, "generator seed, default 0");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth_cmd) {
      synth_spec.height = synth_spec.width;
      const auto manifest = dc3::write_synthetic_dataset(synth_out, synth_spec);
      fmt::print(stderr, "dc3: wrote {} samples to {}\n", manifest.samples.size(), synth_out);
    } else if (*run_cmd) {
      const auto config = run_flags.resolve();
      const auto manifest = dc3::run(config, run_paths.dataset, run_paths.out);
      fmt::print(stderr, "dc3: wrote {} condensed images to {}\n", manifest.entries.size(),
                 run_paths.out);
    } else if (*quantize_cmd) {
      dc3::stage_quantize(quantize_flags.resolve(), quantize_paths.dataset,
                          quantize_paths.out);
    } else if (*sample_cmd) {
      dc3::stage_sample(sample_paths.dataset, sample_paths.out);
    } else if (*compensate_cmd) {
      dc3::stage_compensate(compensate_paths.dataset, compensate_paths.out);
    } else if (*stitch_cmd) {
      dc3::stage_stitch(stitch_paths.dataset, stitch_paths.out);
    } else if (*metrics_cmd) {
      dc3::stage_metrics(metrics_paths.dataset, metrics_paths.out);
      const auto metrics = nlohmann::json::parse(
          std::ifstream(fs::path(metrics_paths.out) / dc3::layout::kMetrics));
      std::cout << metrics["homogenization_l1"].dump(2) << '\n';
    }
  } catch (const dc3::StageError& e) {
    fmt::print(stderr, "dc3: stage {} failed: {}\n", e.stage(), e.what());
    return 1;
  } catch (const dc3::Error& e) {
    fmt::print(stderr, "dc3: [config] {}\n", e.what());
    return 1;
  }
  return 0;
}
