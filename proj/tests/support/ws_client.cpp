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


#include "support/ws_client.hpp"

#include <condition_variable>
#include <deque>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <boost/asio/connect.hpp>
#include <boost/asio/io_context.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/post.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

namespace teleop::testing {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

struct WsClient::Impl : std::enable_shared_from_this<WsClient::Impl> {
  asio::io_context io;
  std::optional<asio::executor_work_guard<asio::io_context::executor_type>> work;
  websocket::stream<tcp::socket> ws{io};
  beast::flat_buffer buffer;
  std::thread thread;
  int receive_buffer = 0;

  std::deque<std::string> outbox;  // io thread only
  bool writing = false;
  bool reading = false;
  bool paused = false;

  mutable std::mutex mu;
  std::condition_variable cv;
  std::vector<ReceivedFrame> received;
  bool closed = false;

  void read() {
    if (paused || reading || closed_flag()) return;
    reading = true;
    ws.async_read(buffer, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      self->reading = false;
      if (ec) {
        self->mark_closed();
        return;
      }
      {
        std::lock_guard<std::mutex> lock(self->mu);
        self->received.push_back(
            {beast::buffers_to_string(self->buffer.data()), std::chrono::steady_clock::now()});
      }
      self->buffer.consume(self->buffer.size());
      self->read();
    });
  }

  void write() {
    if (writing || outbox.empty() || closed_flag()) return;
    writing = true;
    ws.text(true);
    ws.async_write(asio::buffer(outbox.front()),
                   [self = shared_from_this()](beast::error_code ec, std::size_t) {
                     self->writing = false;
                     if (ec) {
                       self->mark_closed();
                       return;
                     }
                     self->outbox.pop_front();
                     self->write();
                   });
  }

  bool closed_flag() const {
    std::lock_guard<std::mutex> lock(mu);
    return closed;
  }

  void mark_closed() {
    std::lock_guard<std::mutex> lock(mu);
    closed = true;
    cv.notify_all();
  }
};

WsClient::WsClient(int receive_buffer) : impl_(std::make_shared<Impl>()) {
  impl_->receive_buffer = receive_buffer;
}

WsClient::~WsClient() { close(); }

void WsClient::connect(const std::string& host, std::uint16_t port) {
  tcp::resolver resolver(impl_->io);
  const auto endpoints = resolver.resolve(host, std::to_string(port));
  auto& socket = beast::get_lowest_layer(impl_->ws);
  socket.open(endpoints.begin()->endpoint().protocol());
  if (impl_->receive_buffer > 0) {
    socket.set_option(asio::socket_base::receive_buffer_size(impl_->receive_buffer));
  }
  socket.connect(endpoints.begin()->endpoint());
  impl_->ws.handshake(host + ":" + std::to_string(port), "/");
  impl_->work.emplace(asio::make_work_guard(impl_->io));
  asio::post(impl_->io, [impl = impl_] { impl->read(); });
  impl_->thread = std::thread([impl = impl_] { impl->io.run(); });
}

void WsClient::send(std::string text) {
  asio::post(impl_->io, [impl = impl_, text = std::move(text)]() mutable {
    impl->outbox.push_back(std::move(text));
    impl->write();
  });
}

void WsClient::set_paused(bool paused) {
  asio::post(impl_->io, [impl = impl_, paused] {
    impl->paused = paused;
    if (!paused) impl->read();
  });
}

void WsClient::close() {
  if (!impl_->thread.joinable()) return;
  asio::post(impl_->io, [impl = impl_] {
    beast::error_code ec;
    // A blocking close would wait for the server's reply on the io thread
    // itself; shutting the socket down is enough for the tests.
    beast::get_lowest_layer(impl->ws).shutdown(tcp::socket::shutdown_both, ec);
    beast::get_lowest_layer(impl->ws).close(ec);
    impl->mark_closed();
  });
  impl_->work.reset();
  impl_->thread.join();
}

bool WsClient::closed() const { return impl_->closed_flag(); }

bool WsClient::wait_closed(std::chrono::milliseconds timeout) {
  std::unique_lock<std::mutex> lock(impl_->mu);
  return impl_->cv.wait_for(lock, timeout, [&] { return impl_->closed; });
}

std::vector<ReceivedFrame> WsClient::frames() const {
  std::lock_guard<std::mutex> lock(impl_->mu);
  return impl_->received;
}

std::size_t WsClient::frame_count() const {
  std::lock_guard<std::mutex> lock(impl_->mu);
  return impl_->received.size();
}

}  // namespace teleop::testing
