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
#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>

#include <nlohmann/json.hpp>

#include "dc3/catalog.hpp"
#include "dc3/error.hpp"
#include "dc3/image_io.hpp"
#include "dc3/rng.hpp"
#include "support/temp_dir.hpp"

namespace dc3 {
namespace {

using testing::TempDir;

void expect_code(ErrorCode code, const std::function<void()>& fn,
                 const std::string& needle = "") {
  try {
    fn();
    FAIL() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
    if (!needle.empty()) EXPECT_NE(e.detail().find(needle), std::string::npos) << e.what();
  }
}

// 2 classes x 3 samples, 6 feature rows, tiny PNGs.
nlohmann::json small_manifest() {
  nlohmann::json m;
  m["name"] = "small";
  m["classes"] = {"dog", "cat"};
  m["feature_file"] = "features.bin";
  m["samples"] = nlohmann::json::array();
  const char* labels[] = {"dog", "cat", "dog", "cat", "dog", "cat"};
  for (int i = 0; i < 6; ++i) {
    m["samples"].push_back({{"id", "s" + std::to_string(i)},
                            {"class", labels[i]},
                            {"image", "img/s" + std::to_string(i) + ".png"},
                            {"feature_row", i}});
  }
  return m;
}

void write_dataset(const TempDir& dir, const nlohmann::json& manifest,
                   std::size_t rows = 6) {
  std::filesystem::create_directories(dir / "img");
  for (int i = 0; i < 6; ++i) {
    write_png(dir / ("img/s" + std::to_string(i) + ".png"), Raster(2, 2, 10, 20, 30));
  }
  FeatureMatrix f(rows, 3);
  for (std::size_t i = 0; i < rows * 3; ++i) f.data()[i] = static_cast<float>(i);
  write_features(dir / "features.bin", f);
  std::ofstream(dir / "manifest.json") << manifest.dump();
}

TEST(Catalog, LoadsValidManifest) {
  TempDir dir;
  write_dataset(dir, small_manifest());
  const auto m = load_manifest(dir / "manifest.json");
  EXPECT_EQ(m.name, "small");
  EXPECT_EQ(m.samples.size(), 6u);
  EXPECT_EQ(m.classes, (std::vector<std::string>{"dog", "cat"}));
  EXPECT_EQ(m.samples[3].class_label, "cat");
  EXPECT_EQ(m.image_path(m.samples[0]), dir.path() / "img/s0.png");
}

TEST(Catalog, DuplicateIdIsNamed) {
  TempDir dir;
  auto j = small_manifest();
  j["samples"][0]["id"] = "a";
  j["samples"][1]["id"] = "a";
  write_dataset(dir, j);
  expect_code(ErrorCode::DuplicateId, [&] { load_manifest(dir / "manifest.json"); }, "a");
}

TEST(Catalog, DanglingFeatureRow) {
  TempDir dir;
  auto j = small_manifest();
  j["samples"][4]["feature_row"] = 10;
  write_dataset(dir, j);
  expect_code(ErrorCode::DanglingFeatureRow, [&] { load_manifest(dir / "manifest.json"); },
              "s4");
}

TEST(Catalog, MissingAndMalformedFiles) {
  TempDir dir;
  expect_code(ErrorCode::MissingFile, [&] { load_manifest(dir / "nope.json"); });
  std::ofstream(dir / "bad.json") << "{ not json";
  expect_code(ErrorCode::MalformedJson, [&] { load_manifest(dir / "bad.json"); });
  auto j = small_manifest();
  j["samples"][2].erase("class");
  write_dataset(dir, j);
  expect_code(ErrorCode::MalformedJson, [&] { load_manifest(dir / "manifest.json"); });
}

TEST(Catalog, ClassInvariants) {
  TempDir dir;
  auto j = small_manifest();
  j["samples"][1]["class"] = "bird";
  write_dataset(dir, j);
  expect_code(ErrorCode::UnknownClass, [&] { load_manifest(dir / "manifest.json"); }, "s1");

  j = small_manifest();
  j["classes"] = {"dog", "cat", "dog"};
  write_dataset(dir, j);
  expect_code(ErrorCode::InvalidManifest, [&] { load_manifest(dir / "manifest.json"); });

  j["classes"] = nlohmann::json::array();
  write_dataset(dir, j);
  expect_code(ErrorCode::InvalidManifest, [&] { load_manifest(dir / "manifest.json"); });
}

TEST(Catalog, MissingImageIsReported) {
  TempDir dir;
  write_dataset(dir, small_manifest());
  std::filesystem::remove(dir / "img/s5.png");
  expect_code(ErrorCode::MissingFile, [&] { load_manifest(dir / "manifest.json"); }, "s5");
}

TEST(Features, ParsesHeaderAndRows) {
  std::vector<std::uint8_t> bytes = {'D', 'C', '3', 'F', 1, 0, 0, 0, 2, 0, 0, 0, 3, 0, 0, 0};
  for (int i = 0; i < 6; ++i) {
    const float v = 0.5f * i;
    const auto* raw = reinterpret_cast<const std::uint8_t*>(&v);
    bytes.insert(bytes.end(), raw, raw + 4);
  }
  const auto f = parse_features(bytes);
  EXPECT_EQ(f.count(), 2u);
  EXPECT_EQ(f.dim(), 3u);
  EXPECT_FLOAT_EQ(f(1, 2), 2.5f);
  EXPECT_EQ(serialize_features(f), bytes);
}

TEST(Features, RejectsBadInput) {
  FeatureMatrix f(2, 3);
  auto bytes = serialize_features(f);

  auto truncated = bytes;
  truncated.resize(bytes.size() - 4);  // 5 floats for a 2x3 header
  expect_code(ErrorCode::TruncatedFile, [&] { parse_features(truncated); });

  auto magic = bytes;
  magic[0] = 'X';
  expect_code(ErrorCode::BadMagic, [&] { parse_features(magic); });

  auto version = bytes;
  version[4] = 2;
  expect_code(ErrorCode::UnsupportedVersion, [&] { parse_features(version); });

  f(1, 2) = std::numeric_limits<float>::quiet_NaN();
  expect_code(ErrorCode::NonFiniteValue, [&] { parse_features(serialize_features(f)); },
              "1, 2");
  f(1, 2) = 0.0f;
  f(0, 1) = std::numeric_limits<float>::infinity();
  expect_code(ErrorCode::NonFiniteValue, [&] { parse_features(serialize_features(f)); },
              "0, 1");
}

// Property: write(load(p)) is byte-identical to p for arbitrary finite data.
TEST(Features, RoundTripIsByteExact) {
  TempDir dir;
  SplitMix64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t count = 1 + rng.next_below(9), dim = 1 + rng.next_below(7);
    std::vector<std::uint8_t> bytes = {'D', 'C', '3', 'F', 1, 0, 0, 0};
    for (std::uint32_t v : {std::uint32_t(count), std::uint32_t(dim)}) {
      for (int b = 0; b < 4; ++b) bytes.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
    }
    for (std::size_t i = 0; i < count * dim; ++i) {
      const float v = static_cast<float>((rng.next_double() - 0.5) * 1e6);
      const auto* raw = reinterpret_cast<const std::uint8_t*>(&v);
      bytes.insert(bytes.end(), raw, raw + 4);
    }
    write_file_bytes(dir / "a.bin", bytes);
    write_features(dir / "b.bin", load_features(dir / "a.bin"));
    EXPECT_EQ(read_file_bytes(dir / "b.bin"), bytes);
  }
}

TEST(ClassView, IndicesInManifestOrder) {
  TempDir dir;
  write_dataset(dir, small_manifest());
  auto m = load_manifest(dir / "manifest.json");
  EXPECT_EQ(class_view(m, "dog"), (std::vector<std::size_t>{0, 2, 4}));
  expect_code(ErrorCode::UnknownClass, [&] { class_view(m, "cow"); });
  m.classes.push_back("empty");
  EXPECT_TRUE(class_view(m, "empty").empty());
}

// Property: class views partition the sample indices.
TEST(ClassView, PartitionsAllSamples) {
  SplitMix64 rng(5);
  for (int trial = 0; trial < 25; ++trial) {
    DatasetManifest m;
    const std::size_t k = 1 + rng.next_below(5);
    for (std::size_t c = 0; c < k; ++c) m.classes.push_back("c" + std::to_string(c));
    const std::size_t n = rng.next_below(40);
    for (std::size_t i = 0; i < n; ++i) {
      m.samples.push_back({"id" + std::to_string(i), m.classes[rng.next_below(k)], "", i});
    }
    std::vector<std::size_t> all;
    for (const auto& c : m.classes) {
      const auto v = class_view(m, c);
      all.insert(all.end(), v.begin(), v.end());
    }
    std::sort(all.begin(), all.end());
    std::vector<std::size_t> expected(n);
    std::iota(expected.begin(), expected.end(), 0);
    EXPECT_EQ(all, expected);
  }
}

}  // namespace
}  // namespace dc3
