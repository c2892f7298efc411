// Copyright 2026 The dlmbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dlm/server/tcp_frontend.h"

#include <array>
#include <utility>

#include "absl/strings/str_cat.h"
#include "dlm/common/endian.h"

namespace dlm::server {

absl::Status WriteMessageFrame(const Fd& fd, const Message& message) {
  std::array<uint8_t, 4 + kMessageSize> frame;
  StoreLittleEndian(frame.data(), static_cast<uint32_t>(kMessageSize));
  const auto body = EncodeMessage(message);
  std::copy(body.begin(), body.end(), frame.begin() + 4);
  return WriteAll(fd, frame);
}

absl::StatusOr<Message> ReadMessageFrame(const Fd& fd) {
  std::array<uint8_t, 4> prefix;
  if (absl::Status s = ReadExact(fd, prefix); !s.ok()) return s;
  const uint32_t length = LoadLittleEndian<uint32_t>(prefix.data());
  if (length != kMessageSize) {
    return absl::DataLossError(absl::StrCat("bad frame length ", length));
  }
  std::array<uint8_t, kMessageSize> body;
  if (absl::Status s = ReadExact(fd, body); !s.ok()) return s;
  return DecodeMessage(body);
}

TcpFrontend::TcpFrontend(LockManager& manager, FrontendOptions options)
    : manager_(manager), options_(options), pool_(options) {}

TcpFrontend::~TcpFrontend() { Stop(); }

absl::Status TcpFrontend::Bind(uint16_t port) {
  absl::StatusOr<Fd> listener = ListenTcp(port);
  if (!listener.ok()) return listener.status();
  absl::StatusOr<uint16_t> bound = LocalPort(*listener);
  if (!bound.ok()) return bound.status();
  listener_ = *std::move(listener);
  port_ = *bound;
  return absl::OkStatus();
}

void TcpFrontend::Start() {
  accept_thread_ = std::thread([this] { AcceptLoop(); });
}

void TcpFrontend::Stop() {
  if (stopping_.exchange(true)) return;
  listener_.Shutdown();
  if (accept_thread_.joinable()) accept_thread_.join();
  std::vector<std::thread> handlers;
  {
    std::lock_guard<std::mutex> lock(mu_);
    for (auto& [id, conn] : connections_) conn->fd.Shutdown();
    handlers.swap(handlers_);
  }
  for (std::thread& t : handlers) t.join();
  listener_.Close();
}

void TcpFrontend::AcceptLoop() {
  while (!stopping_.load()) {
    absl::StatusOr<Fd> socket = AcceptTcp(listener_);
    if (!socket.ok()) {
      if (stopping_.load()) return;
      continue;
    }
    auto conn = std::make_shared<Connection>();
    conn->fd = *std::move(socket);
    std::lock_guard<std::mutex> lock(mu_);
    if (stopping_.load()) return;
    if (static_cast<int>(connections_.size()) >= options_.max_connections) {
      continue;  // refused: the socket closes here
    }
    conn->client_id = next_client_id_++;
    connections_[conn->client_id] = conn;
    handlers_.emplace_back([this, conn] { Serve(conn); });
  }
}

void TcpFrontend::Serve(std::shared_ptr<Connection> conn) {
  bool alive;
  {
    std::lock_guard<std::mutex> lock(conn->send_mu);
    alive = WriteMessageFrame(
                conn->fd, Message{MessageOp::kAck, conn->client_id, 0, 0})
                .ok();
  }
  while (alive) {
    absl::StatusOr<Message> message = ReadMessageFrame(conn->fd);
    if (!message.ok()) break;
    message->client_id = conn->client_id;
    Deliver(pool_.Process([&] { return manager_.Handle(*message); }));
  }
  conn->fd.Shutdown();
  std::lock_guard<std::mutex> lock(mu_);
  connections_.erase(conn->client_id);
}

void TcpFrontend::Deliver(const std::vector<Reply>& replies) {
  for (const Reply& reply : replies) {
    std::shared_ptr<Connection> target;
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = connections_.find(reply.to_client);
      if (it == connections_.end()) continue;
      target = it->second;
    }
    std::lock_guard<std::mutex> lock(target->send_mu);
    (void)WriteMessageFrame(target->fd, reply.message);
  }
}

absl::StatusOr<std::unique_ptr<TcpFrontendClient>> TcpFrontendClient::Connect(
    const std::string& host, uint16_t port) {
  absl::StatusOr<Fd> fd = ConnectTcp(host, port);
  if (!fd.ok()) return fd.status();
  // A host that is not a lock manager never sends the welcome.
  (void)SetReceiveTimeout(*fd, std::chrono::seconds(10));
  absl::StatusOr<Message> welcome = ReadMessageFrame(*fd);
  if (!welcome.ok()) return welcome.status();
  (void)SetReceiveTimeout(*fd, std::chrono::milliseconds(0));
  if (welcome->op != MessageOp::kAck || welcome->client_id == 0) {
    return absl::DataLossError("unexpected welcome message");
  }
  return std::unique_ptr<TcpFrontendClient>(
      new TcpFrontendClient(*std::move(fd), welcome->client_id));
}

absl::Status TcpFrontendClient::Exchange(MessageOp op, uint32_t item,
                                         MessageOp want) {
  const uint64_t request_id = next_request_id_++;
  if (absl::Status s =
          WriteMessageFrame(fd_, Message{op, client_id_, item, request_id});
      !s.ok()) {
    return s;
  }
  absl::StatusOr<Message> reply = ReadMessageFrame(fd_);
  if (!reply.ok()) return reply.status();
  if (reply->request_id != request_id) {
    return absl::DataLossError(
        absl::StrCat("reply for request ", reply->request_id, ", expected ",
                     request_id));
  }
  if (reply->op == MessageOp::kError) {
    return absl::FailedPreconditionError(
        absl::StrCat("server rejected request on item ", item));
  }
  if (reply->op != want) return absl::DataLossError("unexpected reply op");
  return absl::OkStatus();
}

absl::Status TcpFrontendClient::Acquire(uint32_t item, LockMode mode) {
  return Exchange(mode == LockMode::kShared ? MessageOp::kAcquireShared
                                            : MessageOp::kAcquireExclusive,
                  item, MessageOp::kGrant);
}

absl::Status TcpFrontendClient::Release(uint32_t item) {
  return Exchange(MessageOp::kRelease, item, MessageOp::kAck);
}

}  // namespace dlm::server
