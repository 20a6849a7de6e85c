/*
 * Copyright 2026 The intentrec Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "intentrec/service.hpp"

#include <httplib.h>

#include <stdexcept>

#include <json.hpp>

#include "intentrec/error.hpp"
#include "intentrec/report.hpp"

namespace intentrec {

using nlohmann::json;

namespace {

HttpResponse error(int status, const std::string& message) {
  return {status, json{{"error", message}}.dump()};
}

}  // namespace

struct IntentService::Server {
  httplib::Server http;
};

IntentService::IntentService(std::shared_ptr<const ModelBundle> bundle)
    : bundle_(std::move(bundle)) {
  if (!bundle_) throw std::invalid_argument("service needs a bundle");
}

IntentService::~IntentService() = default;

HttpResponse IntentService::handle(std::string_view method, std::string_view path,
                                   std::string_view body) const {
  if (path == "/v1/health") {
    if (method != "GET") return error(405, "use GET for /v1/health");
    const auto& cfg = bundle_->model.config;
    json j{{"status", "ok"},
           {"architecture", std::string(to_string(cfg.architecture))},
           {"classes", cfg.classes},
           {"labels", bundle_->labels},
           {"padded_length", cfg.seq_len},
           {"contextual", bundle_->contextual()},
           {"format_version", std::string(kBundleFormatVersion)},
           {"version", version_string()}};
    return {200, j.dump()};
  }
  if (path != "/v1/intent") return error(404, "unknown path");
  if (method != "POST") return error(405, "use POST for /v1/intent");
  if (body.size() > kMaxBodyBytes) return error(413, "request body exceeds 64 KiB");

  json req;
  try {
    req = json::parse(body);
  } catch (const json::parse_error& e) {
    return error(400, std::string("malformed JSON: ") + e.what());
  }
  if (!req.is_object()) return error(400, "request must be a JSON object");
  if (!req.contains("text") || !req["text"].is_string()) {
    return error(400, "field 'text' (string) is required");
  }
  const std::size_t cl = bundle_->model.config.classes;
  std::size_t top_k = 1;
  if (req.contains("top_k")) {
    const auto& k = req["top_k"];
    if (!k.is_number_integer() || k.get<long long>() < 1 ||
        static_cast<std::size_t>(k.get<long long>()) > cl) {
      return error(400, "top_k must be an integer in [1, " + std::to_string(cl) + "]");
    }
    top_k = static_cast<std::size_t>(k.get<long long>());
  }
  if (bundle_->contextual()) {
    return error(422, "this model expects contextual embeddings and cannot score plain text");
  }
  const Prediction p = predict_text(*bundle_, req["text"].get<std::string>(), top_k);
  json ranked = json::array();
  for (const auto& [label, prob] : p.top_k) ranked.push_back({{"label", label}, {"probability", prob}});
  return {200, json{{"intent", p.intent}, {"posterior", p.posterior}, {"top_k", ranked}}.dump()};
}

int IntentService::bind(const std::string& host, int port) {
  server_ = std::make_unique<Server>();
  auto& http = server_->http;
  http.set_payload_max_length(kMaxBodyBytes);
  auto route = [this](const httplib::Request& req, httplib::Response& res) {
    HttpResponse r;
    try {
      r = handle(req.method, req.path, req.body);
    } catch (const std::exception& e) {
      r = error(500, e.what());
    }
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  http.Get("/v1/health", route);
  http.Post("/v1/intent", route);
  http.Post("/v1/health", route);
  http.Get("/v1/intent", route);
  http.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) {
      const std::string msg = res.status == 413 ? "request body exceeds 64 KiB" : "request failed";
      res.set_content(json{{"error", msg}}.dump(), "application/json");
    }
  });
  const int bound = port == 0 ? http.bind_to_any_port(host) : (http.bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void IntentService::listen() {
  if (!server_) throw std::logic_error("bind() before listen()");
  server_->http.listen_after_bind();
}

void IntentService::stop() {
  if (server_) server_->http.stop();
}

}  // namespace intentrec
