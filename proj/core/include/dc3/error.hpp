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

#include <stdexcept>
#include <string>
#include <string_view>

namespace dc3 {

enum class ErrorCode {
  MissingFile,
  MalformedJson,
  DuplicateId,
  DanglingFeatureRow,
  InvalidManifest,
  UnknownClass,
  BadMagic,
  UnsupportedVersion,
  TruncatedFile,
  NonFiniteValue,
  EmptyInput,
  DimensionMismatch,
  CandidateAlreadySelected,
  EmptyFamily,
  BackendUnreachable,
  BackendError,
  WrongVariantCount,
  InvalidStrategy,
  EmptyImage,
  EmptyDataset,
  GridMismatch,
  ImageDecode,
  ImageEncode,
  ConfigInvalid,
  MissingStageInput,
  Io,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported through this type. The message names the
// offending entity (sample id, row/column, URL, stage) where there is one.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

// Wraps a module error with the pipeline stage it happened in.
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause);

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace dc3
