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
#include "dc3/http_backend.hpp"

#include <httplib.h>

#include <thread>

#include "dc3/base64.hpp"
#include "dc3/error.hpp"
#include "dc3/image_io.hpp"

namespace dc3 {
namespace {

httplib::Client make_client(const HttpBackendOptions& options) {
  httplib::Client client(options.endpoint);
  client.set_connection_timeout(options.connect_timeout);
  client.set_read_timeout(options.read_timeout);
  client.set_write_timeout(options.read_timeout);
  return client;
}

std::string truncate_body(const std::string& body) {
  constexpr std::size_t kMax = 512;
  return body.size() <= kMax ? body : body.substr(0, kMax) + "...";
}

}  // namespace

HttpBackend::HttpBackend(HttpBackendOptions options)
    : options_(std::move(options)) {
  if (options_.endpoint.empty()) {
    throw Error(ErrorCode::ConfigInvalid, "http backend needs an endpoint URL");
  }
  while (!options_.endpoint.empty() && options_.endpoint.back() == '/') {
    options_.endpoint.pop_back();
  }
  if (options_.retries < 0) options_.retries = 0;
}

void HttpBackend::check_health() {
  auto client = make_client(options_);
  auto res = client.Get("/v1/health");
  if (!res) {
    throw Error(ErrorCode::BackendUnreachable,
                options_.endpoint + " (" + httplib::to_string(res.error()) + ")");
  }
  if (res->status != 200) {
    throw Error(ErrorCode::BackendUnreachable,
                options_.endpoint + " health returned " + std::to_string(res->status));
  }
  try {
    const auto doc = nlohmann::json::parse(res->body);
    if (doc.value("status", "") != "ok") {
      throw Error(ErrorCode::BackendUnreachable,
                  options_.endpoint + " reports status " + doc.value("status", "?"));
    }
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::BackendUnreachable,
                options_.endpoint + " health body is not JSON");
  }
}

std::string compensate_request_body(const CompensationRequest& request) {
  nlohmann::ordered_json body;
  body["image"] = base64_encode(encode_png(request.image));
  body["prompt"] = request.prompt.text;
  body["seed"] = request.seed;
  body["guidance_scale"] = request.guidance_scale;
  return body.dump();
}

BackendReply parse_compensate_response(const std::string& body) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::BackendError, "200: response is not JSON");
  }
  if (!doc.contains("image") || !doc["image"].is_string()) {
    throw Error(ErrorCode::BackendError, "200: response has no image");
  }
  const auto png = base64_decode(doc["image"].get<std::string>());
  if (!png) throw Error(ErrorCode::BackendError, "200: image is not base64");
  BackendReply reply;
  try {
    reply.image = decode_image(*png);
  } catch (const Error& e) {
    throw Error(ErrorCode::BackendError, "200: " + e.detail());
  }
  for (const char* key : {"model_id", "steps", "strength"}) {
    if (doc.contains(key)) reply.info[key] = doc[key];
  }
  return reply;
}

BackendReply HttpBackend::run(const CompensationRequest& request) {
  const std::string body = compensate_request_body(request);
  auto client = make_client(options_);
  for (int attempt = 0;; ++attempt) {
    auto res = client.Post("/v1/compensate", body, "application/json");
    const bool retryable = !res || res->status >= 500;
    if (!retryable) {
      if (res->status != 200) {
        throw Error(ErrorCode::BackendError, std::to_string(res->status) + ": " +
                                                 truncate_body(res->body));
      }
      return parse_compensate_response(res->body);
    }
    if (attempt >= options_.retries) {
      if (!res) {
        throw Error(ErrorCode::BackendUnreachable,
                    options_.endpoint + " (" + httplib::to_string(res.error()) + ")");
      }
      throw Error(ErrorCode::BackendError,
                  std::to_string(res->status) + ": " + truncate_body(res->body));
    }
    std::this_thread::sleep_for(options_.backoff_base * (1 << attempt));
  }
}

}  // namespace dc3
