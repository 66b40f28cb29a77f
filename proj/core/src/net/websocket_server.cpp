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

#include "teleop/net/websocket_server.hpp"

#include <atomic>
#include <thread>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

namespace teleop::net {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

namespace {

constexpr int kSendBuffer = 64 * 1024;  // bytes

class Connection : public std::enable_shared_from_this<Connection> {
 public:
  Connection(tcp::socket socket, service::SessionRunner& runner, std::function<void()> on_close)
      : ws_(std::move(socket)), runner_(runner), on_close_(std::move(on_close)) {}

  void run() {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept([self = shared_from_this()](beast::error_code ec) {
      if (ec) return self->close();
      self->open_ = true;
      self->ws_.text(true);
      self->read();
      self->pump();
    });
  }

  /// Writes queued frames one at a time; called on the I/O thread.
  void pump() {
    if (!open_ || writing_) return;
    std::optional<service::OutboundMsg> next = runner_.outbound().try_pop();
    if (!next) return;
    writing_ = true;
    buffer_ = next->serialize();
    ws_.async_write(asio::buffer(buffer_),
                    [self = shared_from_this()](beast::error_code ec, std::size_t) {
                      self->writing_ = false;
                      if (ec) return self->close();
                      self->pump();
                    });
  }

  void shutdown() {
    if (!open_) return;
    beast::error_code ec;
    ws_.next_layer().shutdown(tcp::socket::shutdown_both, ec);
    ws_.next_layer().close(ec);
    close();
  }

  bool open() const { return open_; }

 private:
  void read() {
    ws_.async_read(in_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) return self->close();
      self->runner_.post(beast::buffers_to_string(self->in_.data()));
      self->in_.consume(self->in_.size());
      self->read();
    });
  }

  void close() {
    if (closed_) return;
    closed_ = true;
    open_ = false;
    if (on_close_) on_close_();
  }

  websocket::stream<tcp::socket> ws_;
  service::SessionRunner& runner_;
  std::function<void()> on_close_;
  beast::flat_buffer in_;
  std::string buffer_;
  bool open_ = false;
  bool writing_ = false;
  bool closed_ = false;
};

}  // namespace

struct WebSocketServer::Impl {
  Impl(service::SessionRunner& r, std::uint16_t port, const std::string& address, Callbacks cb)
      : runner(r),
        acceptor(io, tcp::endpoint(asio::ip::make_address(address), port)),
        callbacks(std::move(cb)) {}

  void accept() {
    acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
      if (ec) return;  // acceptor closed
      if (connection) {
        // One operator per session.
        beast::error_code ignored;
        socket.close(ignored);
      } else {
        // Keep the backlog in the drop-aware outbound queue rather than in
        // kernel buffers, so a slow client gets fresh state, not old frames.
        beast::error_code ignored;
        socket.set_option(tcp::no_delay(true), ignored);
        socket.set_option(asio::socket_base::send_buffer_size(kSendBuffer), ignored);
        connection = std::make_shared<Connection>(std::move(socket), runner, [this] {
          // Runs inside a handler that keeps the connection alive.
          connection.reset();
          connected = false;
          runner.set_transport_connected(false);
          if (callbacks.on_disconnect) callbacks.on_disconnect();
        });
        connected = true;
        connection->run();
        if (callbacks.on_connect) callbacks.on_connect();
      }
      accept();
    });
  }

  asio::io_context io;
  service::SessionRunner& runner;
  tcp::acceptor acceptor;
  Callbacks callbacks;
  std::shared_ptr<Connection> connection;
  std::atomic<bool> connected{false};
  std::thread thread;
  bool stopped = false;
};

WebSocketServer::WebSocketServer(service::SessionRunner& runner, std::uint16_t port,
                                 const std::string& address, Callbacks callbacks)
    : impl_(std::make_unique<Impl>(runner, port, address, std::move(callbacks))) {
  runner.set_on_frames([io = &impl_->io, impl = impl_.get()] {
    asio::post(*io, [impl] {
      if (impl->connection) impl->connection->pump();
    });
  });
}

WebSocketServer::~WebSocketServer() { stop(); }

std::uint16_t WebSocketServer::port() const { return impl_->acceptor.local_endpoint().port(); }

void WebSocketServer::start() {
  impl_->accept();
  impl_->thread = std::thread([impl = impl_.get()] { impl->io.run(); });
}

void WebSocketServer::stop() {
  if (impl_->stopped) return;
  impl_->stopped = true;
  impl_->runner.set_on_frames({});
  asio::post(impl_->io, [impl = impl_.get()] {
    beast::error_code ec;
    impl->acceptor.close(ec);
    if (impl->connection) impl->connection->shutdown();
  });
  if (impl_->thread.joinable()) impl_->thread.join();
}

bool WebSocketServer::client_connected() const { return impl_->connected; }

}  // namespace teleop::net
