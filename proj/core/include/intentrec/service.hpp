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

#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>

#include "intentrec/bundle.hpp"

namespace intentrec {

struct HttpResponse {
  int status = 200;
  std::string body;  // JSON
};

/// Prediction service over an immutable bundle. `handle` is the whole
/// request logic and is safe to call from many threads at once.
class IntentService {
 public:
  static constexpr std::size_t kMaxBodyBytes = 64 * 1024;

  explicit IntentService(std::shared_ptr<const ModelBundle> bundle);
  ~IntentService();
  IntentService(const IntentService&) = delete;
  IntentService& operator=(const IntentService&) = delete;

  HttpResponse handle(std::string_view method, std::string_view path,
                      std::string_view body) const;

  /// Binds to host:port (port 0 picks a free one) and returns the port.
  int bind(const std::string& host, int port);
  /// Serves until stop(); call after bind().
  void listen();
  void stop();

  const ModelBundle& bundle() const { return *bundle_; }

 private:
  std::shared_ptr<const ModelBundle> bundle_;
  struct Server;
  std::unique_ptr<Server> server_;
};

}  // namespace intentrec
