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
#include "dc3/pipeline.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <cctype>
#include <sstream>

#include "dc3/catalog.hpp"
#include "dc3/error.hpp"
#include "dc3/http_backend.hpp"
#include "dc3/image_io.hpp"
#include "dc3/metrics.hpp"
#include "dc3/rng.hpp"
#include "parallel.hpp"

namespace dc3 {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

constexpr std::string_view kManifestName = "manifest.json";

// ---------------------------------------------------------------- helpers

ojson read_json(const fs::path& path, std::string_view stage) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::MissingStageInput,
                std::string(stage) + ": " + path.filename().string());
  }
  try {
    return ojson::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedJson, path.string() + ": " + e.what());
  }
}

void write_json(const fs::path& path, const ojson& doc) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::Io, "short write to " + path.string());
}

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

std::string bins_file(const std::string& label) {
  return "bins." + safe_name(label) + ".json";
}
std::string selection_file(const std::string& label) {
  return "selection." + safe_name(label) + ".json";
}

std::uint64_t image_seed(const PipelineConfig& config, const std::string& id) {
  return derive_seed(config.seed, id);
}

// Seed of the optional second (cool', warm') pair.
std::uint64_t second_pair_seed(std::uint64_t seed) {
  return SplitMix64::mix(seed + 1);
}

std::uint64_t stitch_seed(std::uint64_t seed) { return seed ^ 3u; }

struct Dataset {
  DatasetManifest manifest;
  FeatureMatrix features;
};

Dataset load_dataset(const fs::path& dataset_dir) {
  Dataset d;
  d.manifest = load_manifest(dataset_dir / kManifestName);
  d.features = load_features(d.manifest.feature_path());
  return d;
}

PipelineConfig frozen_config(const fs::path& dir, std::string_view stage) {
  PipelineConfig config = PipelineConfig::from_json(read_json(dir / layout::kConfig, stage));
  config.validate();
  return config;
}

// Runs one stage, tagging any module error with the stage name.
template <typename Fn>
void tagged(std::string_view stage, Fn&& fn) {
  try {
    fn();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(std::string(stage), e);
  } catch (const fs::filesystem_error& e) {
    throw StageError(std::string(stage), Error(ErrorCode::Io, e.what()));
  }
}

// Stage output goes to `staging`; on success every top-level entry is moved
// into `out_dir`, replacing what was there.
template <typename Fn>
void transactional(std::string_view stage, const fs::path& out_dir, Fn&& fn) {
  const fs::path staging = out_dir / (".staging-" + std::string(stage));
  fs::remove_all(staging);
  fs::create_directories(staging);
  try {
    tagged(stage, [&] { fn(staging); });
    for (const auto& entry : fs::directory_iterator(staging)) {
      const fs::path target = out_dir / entry.path().filename();
      fs::remove_all(target);
      fs::rename(entry.path(), target);
    }
    fs::remove_all(staging);
  } catch (...) {
    std::error_code ec;
    fs::remove_all(staging, ec);
    throw;
  }
}

// ----------------------------------------------------------------- stages

void quantize_impl(const PipelineConfig& config, const fs::path& dataset_dir,
                   const fs::path& write_dir) {
  config.validate();
  const Dataset data = load_dataset(dataset_dir);
  const auto& classes = data.manifest.classes;

  auto partitions = detail::parallel_map(
      classes.size(), detail::default_workers(), [&](std::size_t c) {
        const auto indices = class_view(data.manifest, classes[c]);
        // Every image of a class must share its dimensions.
        int width = 0, height = 0;
        for (auto i : indices) {
          const auto& s = data.manifest.samples[i];
          const Raster image = read_image(data.manifest.image_path(s));
          if (width == 0) {
            width = image.width;
            height = image.height;
          } else if (image.width != width || image.height != height) {
            throw Error(ErrorCode::DimensionMismatch,
                        s.id + " is " + std::to_string(image.width) + "x" +
                            std::to_string(image.height) + ", class " +
                            classes[c] + " is " + std::to_string(width) + "x" +
                            std::to_string(height));
          }
        }
        BinPartition part;
        part.class_label = classes[c];
        part.dim = data.features.dim();
        if (indices.empty()) return part;
        KMeansOptions options;
        options.bins = effective_bins(config.bins, config.ipc, indices.size());
        options.seed = derive_seed(config.seed, classes[c]);
        options.max_iters = config.max_iters;
        options.tol = config.tol;
        return kmeans_partition(gather_features(data.manifest, data.features, indices),
                                options, classes[c]);
      });

  write_json(write_dir / layout::kConfig, config.to_json());
  for (std::size_t c = 0; c < classes.size(); ++c) {
    const auto& part = partitions[c];
    const auto indices = class_view(data.manifest, classes[c]);
    ojson doc;
    doc["class"] = classes[c];
    doc["bins"] = part.bins;
    doc["seed"] = derive_seed(config.seed, classes[c]);
    doc["iterations"] = part.iterations;
    doc["converged"] = part.converged;
    doc["inertia"] = part.inertia;
    doc["inertia_history"] = part.inertia_history;
    doc["centroids"] = ojson::array();
    for (std::size_t j = 0; j < part.bins; ++j) {
      const auto row = part.centroid(j);
      doc["centroids"].push_back(std::vector<double>(row.begin(), row.end()));
    }
    doc["samples"] = ojson::array();
    for (std::size_t k = 0; k < indices.size(); ++k) {
      doc["samples"].push_back({{"id", data.manifest.samples[indices[k]].id},
                                {"bin", part.assignment[k]}});
    }
    write_json(write_dir / layout::kBinsDir / bins_file(classes[c]), doc);
  }
}

BinPartition partition_from_json(const ojson& doc, const DatasetManifest& manifest,
                                 std::span<const std::size_t> indices,
                                 std::size_t dim) {
  BinPartition part;
  part.class_label = doc.at("class").get<std::string>();
  part.bins = doc.at("bins").get<std::size_t>();
  part.dim = dim;
  part.iterations = doc.at("iterations").get<std::size_t>();
  part.converged = doc.at("converged").get<bool>();
  part.inertia = doc.at("inertia").get<double>();
  part.inertia_history = doc.at("inertia_history").get<std::vector<double>>();
  for (const auto& row : doc.at("centroids")) {
    const auto values = row.get<std::vector<double>>();
    if (values.size() != dim) {
      throw Error(ErrorCode::DimensionMismatch, "centroid of class " + part.class_label);
    }
    part.centroids.insert(part.centroids.end(), values.begin(), values.end());
  }
  const auto& samples = doc.at("samples");
  if (samples.size() != indices.size()) {
    throw Error(ErrorCode::InvalidManifest,
                "bins file for " + part.class_label + " does not match the dataset");
  }
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (samples[k].at("id").get<std::string>() != manifest.samples[indices[k]].id) {
      throw Error(ErrorCode::InvalidManifest,
                  "bins file for " + part.class_label + " does not match the dataset");
    }
    const auto bin = samples[k].at("bin").get<std::size_t>();
    if (bin >= part.bins) {
      throw Error(ErrorCode::InvalidManifest, "bin index out of range");
    }
    part.assignment.push_back(bin);
  }
  return part;
}

void sample_impl(const fs::path& dataset_dir, const fs::path& read_dir,
                 const fs::path& write_dir) {
  const PipelineConfig config = frozen_config(read_dir, "sample");
  const Dataset data = load_dataset(dataset_dir);
  const auto& classes = data.manifest.classes;

  std::vector<ojson> bin_docs;
  for (const auto& label : classes) {
    bin_docs.push_back(read_json(read_dir / layout::kBinsDir / bins_file(label), "sample"));
  }

  auto selections = detail::parallel_map(
      classes.size(), detail::default_workers(), [&](std::size_t c) {
        const auto indices = class_view(data.manifest, classes[c]);
        SelectionResult result;
        result.class_label = classes[c];
        result.mode = config.mode;
        if (indices.empty()) return result;
        const BinPartition part =
            partition_from_json(bin_docs[c], data.manifest, indices, data.features.dim());
        return select_per_class(gather_features(data.manifest, data.features, indices),
                                part, config.ipc, config.mode);
      });

  for (std::size_t c = 0; c < classes.size(); ++c) {
    const auto indices = class_view(data.manifest, classes[c]);
    const auto& sel = selections[c];
    ojson doc;
    doc["class"] = classes[c];
    doc["mode"] = to_string(config.mode);
    doc["ipc"] = config.ipc;
    doc["bins"] = bin_docs[c].at("bins");
    doc["per_bin_quota"] = sel.per_bin_quota;
    doc["selected"] = ojson::array();
    for (std::size_t k = 0; k < sel.selected.size(); ++k) {
      doc["selected"].push_back({{"id", data.manifest.samples[indices[sel.selected[k]]].id},
                                 {"bin", sel.bin_of[k]},
                                 {"gain", sel.gains[k]}});
    }
    write_json(write_dir / layout::kSelectionDir / selection_file(classes[c]), doc);
  }
}

struct SelectedSample {
  std::string id;
  std::string class_label;
  std::size_t bin = 0;
  double gain = 0.0;
  std::size_t manifest_index = 0;
};

std::vector<SelectedSample> read_selections(const DatasetManifest& manifest,
                                            const fs::path& read_dir,
                                            std::string_view stage) {
  std::map<std::string, std::size_t> by_id;
  for (std::size_t i = 0; i < manifest.samples.size(); ++i) by_id[manifest.samples[i].id] = i;
  std::vector<SelectedSample> out;
  for (const auto& label : manifest.classes) {
    const ojson doc =
        read_json(read_dir / layout::kSelectionDir / selection_file(label), stage);
    for (const auto& item : doc.at("selected")) {
      SelectedSample s;
      s.id = item.at("id").get<std::string>();
      s.class_label = label;
      s.bin = item.at("bin").get<std::size_t>();
      s.gain = item.at("gain").get<double>();
      const auto it = by_id.find(s.id);
      if (it == by_id.end() || manifest.samples[it->second].class_label != label) {
        throw Error(ErrorCode::InvalidManifest, "selected id " + s.id + " not in class " + label);
      }
      s.manifest_index = it->second;
      out.push_back(std::move(s));
    }
  }
  return out;
}

fs::path variant_path(const SelectedSample& s, std::string_view suffix) {
  return fs::path(layout::kCompensatedDir) / safe_name(s.class_label) /
         (safe_name(s.id) + "." + std::string(suffix) + ".png");
}

constexpr std::string_view kVariantSuffixes[] = {"cool", "warm", "cool2", "warm2"};

void compensate_impl(const fs::path& dataset_dir, const fs::path& read_dir,
                     const fs::path& write_dir, CompensationBackend* override_backend) {
  const PipelineConfig config = frozen_config(read_dir, "compensate");
  const Dataset data = load_dataset(dataset_dir);
  const auto selected = read_selections(data.manifest, read_dir, "compensate");

  std::unique_ptr<CompensationBackend> owned;
  CompensationBackend* backend = override_backend;
  if (backend == nullptr) {
    owned = make_backend(config);
    backend = owned.get();
  }
  backend->check_health();

  std::vector<Raster> images;
  images.reserve(selected.size());
  for (const auto& s : selected) {
    images.push_back(read_image(data.manifest.image_path(data.manifest.samples[s.manifest_index])));
  }
  const std::size_t pairs = config.variants == 4 ? 2 : 1;
  std::vector<CompensationJob> jobs;
  for (std::size_t i = 0; i < selected.size(); ++i) {
    const std::uint64_t seed = image_seed(config, selected[i].id);
    jobs.push_back({selected[i].id, &images[i], seed});
    if (pairs == 2) jobs.push_back({selected[i].id, &images[i], second_pair_seed(seed)});
  }
  const auto results = compensate_all(jobs, default_catalog(), config.guidance_scale,
                                      *backend, config.max_in_flight);

  ojson log;
  log["backend"] = backend->name();
  log["guidance_scale"] = config.guidance_scale;
  log["variants"] = config.variants;
  log["entries"] = ojson::array();
  for (std::size_t i = 0; i < selected.size(); ++i) {
    const auto& s = selected[i];
    fs::create_directories(write_dir / layout::kCompensatedDir / safe_name(s.class_label));
    ojson entry;
    entry["id"] = s.id;
    entry["class"] = s.class_label;
    entry["image_seed"] = image_seed(config, s.id);
    entry["pairs"] = ojson::array();
    entry["files"] = ojson::array();
    for (std::size_t p = 0; p < pairs; ++p) {
      const auto& pair = results[i * pairs + p];
      entry["pairs"].push_back(pair.provenance.to_json());
      const auto cool = variant_path(s, kVariantSuffixes[2 * p]);
      const auto warm = variant_path(s, kVariantSuffixes[2 * p + 1]);
      write_png(write_dir / cool, pair.cool);
      write_png(write_dir / warm, pair.warm);
      entry["files"].push_back(cool.generic_string());
      entry["files"].push_back(warm.generic_string());
    }
    log["entries"].push_back(std::move(entry));
  }
  write_json(write_dir / layout::kCompensatedDir / layout::kCompensationLog, log);
}

void stitch_impl(const fs::path& dataset_dir, const fs::path& read_dir,
                 const fs::path& write_dir) {
  const PipelineConfig config = frozen_config(read_dir, "stitch");
  const Dataset data = load_dataset(dataset_dir);
  const auto selected = read_selections(data.manifest, read_dir, "stitch");
  const ojson log =
      read_json(read_dir / layout::kCompensatedDir / layout::kCompensationLog, "stitch");
  const auto& entries = log.at("entries");
  if (entries.size() != selected.size()) {
    throw Error(ErrorCode::MissingStageInput, "stitch: compensation log is incomplete");
  }

  CondensedManifest manifest;
  manifest.config = config.to_json();
  manifest.backend = log.at("backend").get<std::string>();
  manifest.stitch = to_string(config.stitch);

  for (std::size_t i = 0; i < selected.size(); ++i) {
    const auto& s = selected[i];
    const auto& entry = entries[i];
    if (entry.at("id").get<std::string>() != s.id) {
      throw Error(ErrorCode::InvalidManifest, "compensation log order differs at " + s.id);
    }
    std::vector<Raster> compensated;
    for (const auto& file : entry.at("files")) {
      const fs::path path = read_dir / file.get<std::string>();
      if (!fs::exists(path)) {
        throw Error(ErrorCode::MissingStageInput, "stitch: " + file.get<std::string>());
      }
      compensated.push_back(read_image(path));
    }
    std::vector<Raster> variants;
    if (required_variants(config.stitch) == 4) {
      for (std::size_t k = 0; k < 4; ++k) variants.push_back(compensated[k % compensated.size()]);
    } else {
      variants = {compensated[0], compensated[1]};
    }
    const std::uint64_t seed = entry.at("image_seed").get<std::uint64_t>();
    const Raster out = stitch(variants, config.stitch, stitch_seed(seed));
    const fs::path rel = fs::path(layout::kImagesDir) / safe_name(s.class_label) /
                         (safe_name(s.id) + ".png");
    fs::create_directories((write_dir / rel).parent_path());
    write_png(write_dir / rel, out);

    CondensedEntry ce;
    ce.output = rel.generic_string();
    ce.source_id = s.id;
    ce.class_label = s.class_label;
    ce.bin = s.bin;
    ce.gain = s.gain;
    for (const auto& pair : entry.at("pairs")) {
      ce.cool_prompts.push_back(pair.at("cool_prompt").get<std::string>());
      ce.warm_prompts.push_back(pair.at("warm_prompt").get<std::string>());
    }
    ce.image_seed = seed;
    ce.stitch_seed = stitch_seed(seed);
    manifest.entries.push_back(std::move(ce));
  }
  write_json(write_dir / layout::kCondensed, manifest.to_json());
}

ojson colorfulness_json(const DatasetColorfulness& c) {
  return {{"mean", c.mean}, {"min", c.min}, {"max", c.max}, {"count", c.count}};
}

ojson report_json(const HomogenizationReport& r) {
  return {{"R", r.l1[0]}, {"G", r.l1[1]}, {"B", r.l1[2]}, {"mean", r.mean}};
}

void metrics_impl(const fs::path& dataset_dir, const fs::path& read_dir,
                  const fs::path& write_dir) {
  const DatasetManifest manifest = load_manifest(dataset_dir / kManifestName);
  const ojson condensed_doc = read_json(read_dir / layout::kCondensed, "metrics");
  CondensedManifest condensed = CondensedManifest::from_json(condensed_doc);

  std::map<std::string, std::size_t> by_id;
  for (std::size_t i = 0; i < manifest.samples.size(); ++i) by_id[manifest.samples[i].id] = i;

  ColorfulnessAccumulator original_score, selected_score, condensed_score;
  PixelHistogram original_hist, selected_hist, condensed_hist;
  for (const auto& s : manifest.samples) {
    const Raster image = read_image(manifest.image_path(s));
    original_score.add(image);
    original_hist.add(image);
  }
  for (const auto& e : condensed.entries) {
    const auto it = by_id.find(e.source_id);
    if (it == by_id.end()) {
      throw Error(ErrorCode::InvalidManifest, "unknown source id " + e.source_id);
    }
    const Raster source = read_image(manifest.image_path(manifest.samples[it->second]));
    selected_score.add(source);
    selected_hist.add(source);
    const fs::path output = read_dir / e.output;
    if (!fs::exists(output)) throw Error(ErrorCode::MissingStageInput, "metrics: " + e.output);
    const Raster image = read_image(output);
    condensed_score.add(image);
    condensed_hist.add(image);
  }

  const RgbKde original_kde = kde_from_histogram(original_hist);
  const RgbKde selected_kde = kde_from_histogram(selected_hist);
  const RgbKde condensed_kde = kde_from_histogram(condensed_hist);
  const auto condensed_report = homogenization_report(original_kde, condensed_kde);
  const auto selected_report = homogenization_report(original_kde, selected_kde);

  auto bandwidths = [](const RgbKde& k) {
    return std::vector<double>{k[0].bandwidth, k[1].bandwidth, k[2].bandwidth};
  };
  ojson metrics;
  metrics["colorfulness"] = {
      {"original", colorfulness_json(original_score.result())},
      {"selected", colorfulness_json(selected_score.result())},
      {"condensed", colorfulness_json(condensed_score.result())},
  };
  metrics["kde"] = {
      {"grid_points", kKdeGridPoints},
      {"kernel", "gaussian"},
      {"boundary", "reflection"},
      {"bandwidth", {{"original", bandwidths(original_kde)},
                     {"selected", bandwidths(selected_kde)},
                     {"condensed", bandwidths(condensed_kde)}}},
  };
  metrics["homogenization_l1"] = {
      {"condensed_vs_original", report_json(condensed_report)},
      {"selected_vs_original", report_json(selected_report)},
  };
  write_json(write_dir / layout::kMetrics, metrics);

  std::ostringstream csv;
  csv << "grid,original_R,original_G,original_B,selected_R,selected_G,selected_B,"
         "condensed_R,condensed_G,condensed_B\n";
  for (std::size_t g = 0; g < kKdeGridPoints; ++g) {
    csv << format_double(original_kde[0].grid[g]);
    for (const RgbKde* kde : {&original_kde, &selected_kde, &condensed_kde}) {
      for (std::size_t c = 0; c < 3; ++c) csv << ',' << format_double((*kde)[c].density[g]);
    }
    csv << '\n';
  }
  const std::string text = csv.str();
  write_file_bytes(write_dir / layout::kKdeCsv,
                   {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});

  condensed.metrics = {
      {"colorfulness_mean", {{"original", original_score.result().mean},
                             {"selected", selected_score.result().mean},
                             {"condensed", condensed_score.result().mean}}},
      {"homogenization_l1_mean", {{"condensed_vs_original", condensed_report.mean},
                                  {"selected_vs_original", selected_report.mean}}},
  };
  write_json(write_dir / layout::kCondensed, condensed.to_json());
}

}  // namespace

// ----------------------------------------------------------------- config

void PipelineConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::ConfigInvalid, what); };
  if (ipc == 0) fail("ipc must be positive");
  if (bins == 0) fail("bins must be positive");
  if (max_iters == 0) fail("max_iters must be positive");
  if (!(tol >= 0.0)) fail("tol must be nonnegative");
  if (!(guidance_scale > 0.0)) fail("guidance_scale must be positive");
  if (variants != 2 && variants != 4) fail("variants must be 2 or 4");
  if (variants == 4 && stitch.kind != StitchKind::Quarter4) {
    fail("variants 4 is only used by the quarter4 stitch");
  }
  if (max_in_flight == 0) fail("max_in_flight must be positive");
  if (backend == BackendKind::Http && endpoint.empty()) {
    fail("the http backend needs an endpoint");
  }
  if (stitch.kind == StitchKind::PixelMask &&
      !(stitch.fraction >= 0.0 && stitch.fraction <= 1.0)) {
    fail("pixel fraction must be in [0, 1]");
  }
  if (stitch.kind == StitchKind::Grid && stitch.grid < 1) fail("grid must be positive");
}

ojson PipelineConfig::to_json() const {
  ojson j;
  j["ipc"] = ipc;
  j["bins"] = bins;
  j["seed"] = seed;
  j["mode"] = to_string(mode);
  j["stitch"] = to_string(stitch);
  j["backend"] = backend == BackendKind::Fallback ? "fallback" : "http";
  j["endpoint"] = endpoint;
  j["guidance_scale"] = guidance_scale;
  j["variants"] = variants;
  j["max_iters"] = max_iters;
  j["tol"] = tol;
  j["max_in_flight"] = max_in_flight;
  return j;
}

PipelineConfig PipelineConfig::from_json(const nlohmann::json& doc) {
  return from_json(doc, PipelineConfig{});
}

PipelineConfig PipelineConfig::from_json(const nlohmann::json& doc,
                                         const PipelineConfig& base) {
  if (!doc.is_object()) throw Error(ErrorCode::ConfigInvalid, "config must be a JSON object");
  static const std::vector<std::string> known = {
      "ipc", "bins", "seed", "mode", "stitch", "backend", "endpoint",
      "guidance_scale", "variants", "max_iters", "tol", "max_in_flight"};
  for (const auto& [key, value] : doc.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw Error(ErrorCode::ConfigInvalid, "unknown config key \"" + key + "\"");
    }
  }
  PipelineConfig c = base;
  try {
    if (doc.contains("ipc")) c.ipc = doc["ipc"].get<std::size_t>();
    if (doc.contains("bins")) c.bins = doc["bins"].get<std::size_t>();
    if (doc.contains("seed")) c.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("mode")) c.mode = parse_selection_mode(doc["mode"].get<std::string>());
    if (doc.contains("stitch")) {
      try {
        c.stitch = parse_stitch_strategy(doc["stitch"].get<std::string>());
      } catch (const Error& e) {
        throw Error(ErrorCode::ConfigInvalid, "stitch: " + e.detail());
      }
    }
    if (doc.contains("backend")) {
      const auto b = doc["backend"].get<std::string>();
      if (b == "fallback") {
        c.backend = BackendKind::Fallback;
      } else if (b == "http") {
        c.backend = BackendKind::Http;
      } else {
        throw Error(ErrorCode::ConfigInvalid, "backend must be fallback or http");
      }
    }
    if (doc.contains("endpoint")) c.endpoint = doc["endpoint"].get<std::string>();
    if (doc.contains("guidance_scale")) c.guidance_scale = doc["guidance_scale"].get<double>();
    if (doc.contains("variants")) c.variants = doc["variants"].get<int>();
    if (doc.contains("max_iters")) c.max_iters = doc["max_iters"].get<std::size_t>();
    if (doc.contains("tol")) c.tol = doc["tol"].get<double>();
    if (doc.contains("max_in_flight")) c.max_in_flight = doc["max_in_flight"].get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigInvalid, e.what());
  }
  return c;
}

std::unique_ptr<CompensationBackend> make_backend(const PipelineConfig& config) {
  if (config.backend == BackendKind::Http) {
    HttpBackendOptions options;
    options.endpoint = config.endpoint;
    return std::make_unique<HttpBackend>(options);
  }
  return std::make_unique<FallbackBackend>();
}

std::string safe_name(std::string_view text) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c) || c == '.' || c == '_' || c == '-') {
      out += ch;
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 15];
    }
  }
  // "." and ".." are not usable as file names.
  if (out == ".") return "%2E";
  if (out == "..") return "%2E%2E";
  return out;
}

// --------------------------------------------------------- condensed data

ojson CondensedManifest::to_json() const {
  ojson j;
  j["config"] = config;
  j["backend"] = backend;
  j["stitch"] = stitch;
  j["half2_split"] = "vertical: left half from cool, right half from warm";
  j["entries"] = ojson::array();
  for (const auto& e : entries) {
    j["entries"].push_back({{"output", e.output},
                            {"source_id", e.source_id},
                            {"class", e.class_label},
                            {"bin", e.bin},
                            {"gain", e.gain},
                            {"cool_prompts", e.cool_prompts},
                            {"warm_prompts", e.warm_prompts},
                            {"image_seed", e.image_seed},
                            {"stitch_seed", e.stitch_seed},
                            {"stitch", stitch}});
  }
  j["metrics"] = metrics;
  return j;
}

CondensedManifest CondensedManifest::from_json(const nlohmann::json& doc) {
  CondensedManifest m;
  try {
    m.config = doc.at("config");
    m.backend = doc.at("backend").get<std::string>();
    m.stitch = doc.at("stitch").get<std::string>();
    for (const auto& e : doc.at("entries")) {
      CondensedEntry ce;
      ce.output = e.at("output").get<std::string>();
      ce.source_id = e.at("source_id").get<std::string>();
      ce.class_label = e.at("class").get<std::string>();
      ce.bin = e.at("bin").get<std::size_t>();
      ce.gain = e.at("gain").get<double>();
      ce.cool_prompts = e.at("cool_prompts").get<std::vector<std::string>>();
      ce.warm_prompts = e.at("warm_prompts").get<std::vector<std::string>>();
      ce.image_seed = e.at("image_seed").get<std::uint64_t>();
      ce.stitch_seed = e.at("stitch_seed").get<std::uint64_t>();
      m.entries.push_back(std::move(ce));
    }
    m.metrics = doc.contains("metrics") ? ojson(doc.at("metrics")) : ojson();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedJson, std::string("condensed manifest: ") + e.what());
  }
  return m;
}

CondensedManifest load_condensed_manifest(const fs::path& out_dir) {
  return CondensedManifest::from_json(read_json(out_dir / layout::kCondensed, "load"));
}

void validate_condensed(const fs::path& dataset_dir, const fs::path& out_dir) {
  const DatasetManifest dataset = load_manifest(dataset_dir / kManifestName);
  const CondensedManifest condensed = load_condensed_manifest(out_dir);
  const PipelineConfig config = PipelineConfig::from_json(condensed.config);
  std::map<std::string, std::size_t> per_class;
  std::set<std::string> seen;
  for (const auto& e : condensed.entries) {
    if (!seen.insert(e.source_id).second) {
      throw Error(ErrorCode::InvalidManifest, "duplicate source " + e.source_id);
    }
    ++per_class[e.class_label];
    const fs::path path = out_dir / e.output;
    if (!fs::is_regular_file(path)) {
      throw Error(ErrorCode::InvalidManifest, "missing output " + e.output);
    }
    try {
      (void)read_image(path);
    } catch (const Error& err) {
      throw Error(ErrorCode::InvalidManifest, "undecodable output " + e.output);
    }
  }
  for (const auto& label : dataset.classes) {
    const std::size_t expected = std::min(config.ipc, class_view(dataset, label).size());
    if (per_class[label] != expected) {
      throw Error(ErrorCode::InvalidManifest,
                  "class " + label + " has " + std::to_string(per_class[label]) +
                      " outputs, expected " + std::to_string(expected));
    }
  }
}

// ------------------------------------------------------------ entry points

void stage_quantize(const PipelineConfig& config, const fs::path& dataset_dir,
                    const fs::path& out_dir) {
  tagged("quantize", [&] { config.validate(); fs::create_directories(out_dir); });
  transactional("quantize", out_dir,
                [&](const fs::path& staging) { quantize_impl(config, dataset_dir, staging); });
}

void stage_sample(const fs::path& dataset_dir, const fs::path& out_dir) {
  transactional("sample", out_dir, [&](const fs::path& staging) {
    sample_impl(dataset_dir, out_dir, staging);
  });
}

void stage_compensate(const fs::path& dataset_dir, const fs::path& out_dir,
                      CompensationBackend* backend) {
  transactional("compensate", out_dir, [&](const fs::path& staging) {
    compensate_impl(dataset_dir, out_dir, staging, backend);
  });
}

void stage_stitch(const fs::path& dataset_dir, const fs::path& out_dir) {
  transactional("stitch", out_dir, [&](const fs::path& staging) {
    stitch_impl(dataset_dir, out_dir, staging);
  });
}

void stage_metrics(const fs::path& dataset_dir, const fs::path& out_dir) {
  transactional("metrics", out_dir, [&](const fs::path& staging) {
    metrics_impl(dataset_dir, out_dir, staging);
  });
}

CondensedManifest run(const PipelineConfig& config, const fs::path& dataset_dir,
                      const fs::path& out_dir, CompensationBackend* backend) {
  tagged("config", [&] { config.validate(); });
  fs::path target = fs::absolute(out_dir).lexically_normal();
  if (!target.has_filename()) target = target.parent_path();
  tagged("run", [&] {
    if (fs::exists(target) &&
        (!fs::is_directory(target) || !fs::is_empty(target))) {
      throw Error(ErrorCode::Io, target.string() + " exists and is not empty");
    }
    fs::create_directories(target.parent_path());
  });
  const fs::path staging = target.parent_path() / ("." + target.filename().string() + ".staging");
  std::error_code ec;
  fs::remove_all(staging, ec);
  fs::create_directories(staging);
  try {
    tagged("quantize", [&] { quantize_impl(config, dataset_dir, staging); });
    tagged("sample", [&] { sample_impl(dataset_dir, staging, staging); });
    tagged("compensate", [&] { compensate_impl(dataset_dir, staging, staging, backend); });
    tagged("stitch", [&] { stitch_impl(dataset_dir, staging, staging); });
    tagged("metrics", [&] { metrics_impl(dataset_dir, staging, staging); });
    tagged("commit", [&] {
      fs::remove(target, ec);
      fs::rename(staging, target);
    });
  } catch (...) {
    fs::remove_all(staging, ec);
    throw;
  }
  return load_condensed_manifest(target);
}

}  // namespace dc3
