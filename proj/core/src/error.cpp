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

#include "dc3/error.hpp"

namespace dc3 {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::MalformedJson: return "MalformedJson";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::DanglingFeatureRow: return "DanglingFeatureRow";
    case ErrorCode::InvalidManifest: return "InvalidManifest";
    case ErrorCode::UnknownClass: return "UnknownClass";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::TruncatedFile: return "TruncatedFile";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::CandidateAlreadySelected: return "CandidateAlreadySelected";
    case ErrorCode::EmptyFamily: return "EmptyFamily";
    case ErrorCode::BackendUnreachable: return "BackendUnreachable";
    case ErrorCode::BackendError: return "BackendError";
    case ErrorCode::WrongVariantCount: return "WrongVariantCount";
    case ErrorCode::InvalidStrategy: return "InvalidStrategy";
    case ErrorCode::EmptyImage: return "EmptyImage";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::ImageDecode: return "ImageDecode";
    case ErrorCode::ImageEncode: return "ImageEncode";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::MissingStageInput: return "MissingStageInput";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + "(" + detail + ")"),
      code_(code),
      detail_(detail) {}

StageError::StageError(std::string stage, const Error& cause)
    : Error(cause.code(), "[" + stage + "] " + cause.detail()),
      stage_(std::move(stage)) {}

}  // namespace dc3
