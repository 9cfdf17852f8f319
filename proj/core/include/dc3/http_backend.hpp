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

#include <chrono>
#include <string>

#include "dc3/compensator.hpp"

namespace dc3 {

struct HttpBackendOptions {
  std::string endpoint;  // scheme://host[:port], e.g. http://127.0.0.1:8000
  int retries = 2;
  std::chrono::milliseconds backoff_base{250};
  std::chrono::seconds connect_timeout{5};
  std::chrono::seconds read_timeout{300};
};

// Client for the model server's image-to-image endpoint:
//   GET  /v1/health      -> {"status": "ok", "model_ids": [...]}
//   POST /v1/compensate  {image, prompt, seed, guidance_scale}
//                        -> {image, model_id, steps, strength}
// Images travel as base64 PNG. Connection failures and 5xx replies are
// retried with exponential backoff; 4xx replies fail at once.
class HttpBackend final : public CompensationBackend {
 public:
  explicit HttpBackend(HttpBackendOptions options);

  std::string name() const override { return "http"; }
  void check_health() override;
  BackendReply run(const CompensationRequest& request) override;

  const std::string& endpoint() const noexcept { return options_.endpoint; }

 private:
  HttpBackendOptions options_;
};

// Request body exactly as sent on the wire.
std::string compensate_request_body(const CompensationRequest& request);

// Parses a /v1/compensate response body. Throws BackendError on a bad body.
BackendReply parse_compensate_response(const std::string& body);

}  // namespace dc3
