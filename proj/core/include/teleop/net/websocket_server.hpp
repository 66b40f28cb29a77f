// Copyright 2026 The teleop Authors
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

#include <cstdint>
#include <functional>
#include <memory>
#include <string>

#include "teleop/service/session.hpp"

namespace teleop::net {

/**
 * Single-client WebSocket transport for a SessionRunner. Inbound text
 * frames are posted to the runner; outbound frames are drained from the
 * runner's queue by an asynchronous writer, so the control loop never
 * blocks on the socket. A second client is refused while one is connected.
 */
class WebSocketServer {
 public:
  struct Callbacks {
    std::function<void()> on_connect;
    std::function<void()> on_disconnect;
  };

  /// port 0 picks a free port; see port().
  WebSocketServer(service::SessionRunner& runner, std::uint16_t port,
                  const std::string& address = "127.0.0.1", Callbacks callbacks = {});
  ~WebSocketServer();

  WebSocketServer(const WebSocketServer&) = delete;
  WebSocketServer& operator=(const WebSocketServer&) = delete;

  std::uint16_t port() const;
  /// Runs the I/O loop on a background thread.
  void start();
  /// Closes the connection and joins the I/O thread. Idempotent.
  void stop();

  bool client_connected() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace teleop::net
