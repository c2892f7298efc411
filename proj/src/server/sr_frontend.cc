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

#include "dlm/server/sr_frontend.h"

#include <utility>

#include "absl/strings/str_cat.h"

namespace dlm::server {
namespace {

constexpr int kServerReceiveDepth = 4;

}  // namespace

verbs::Completion SendWithRetry(verbs::QueuePair& qp,
                                std::span<const uint8_t> payload,
                                int attempts) {
  verbs::Completion c;
  for (int i = 0; i < attempts; ++i) {
    c = qp.Send(payload);
    if (c.status != verbs::WcStatus::kReceiverNotReady) return c;
    std::this_thread::yield();
  }
  return c;
}

SendRecvFrontend::SendRecvFrontend(LockManager& manager,
                                   std::shared_ptr<verbs::Node> node,
                                   FrontendOptions options)
    : manager_(manager),
      node_(std::move(node)),
      options_(options),
      pool_(options) {}

SendRecvFrontend::~SendRecvFrontend() { Stop(); }

void SendRecvFrontend::Start() {
  accept_thread_ = std::thread([this] { AcceptLoop(); });
}

void SendRecvFrontend::Stop() {
  if (stopping_.exchange(true)) return;
  node_->Shutdown();
  if (accept_thread_.joinable()) accept_thread_.join();
  std::vector<std::thread> handlers;
  {
    std::lock_guard<std::mutex> lock(mu_);
    for (auto& [id, peer] : peers_) {
      peer->qp->recv_cq().Close();
    }
    handlers.swap(handlers_);
  }
  for (std::thread& t : handlers) t.join();
  std::lock_guard<std::mutex> lock(mu_);
  for (auto& [id, peer] : peers_) peer->qp->Close();
  peers_.clear();
}

void SendRecvFrontend::AcceptLoop() {
  while (std::optional<verbs::Connection> conn = node_->Accept()) {
    std::lock_guard<std::mutex> lock(mu_);
    if (static_cast<int>(peers_.size()) >= options_.max_connections) {
      conn->qp->Close();
      continue;
    }
    auto peer = std::make_shared<Peer>();
    peer->qp = conn->qp;
    const uint32_t id = conn->info.peer_id;
    peers_[id] = peer;
    handlers_.emplace_back([this, id, peer] { Serve(id, peer); });
  }
}

void SendRecvFrontend::Serve(uint32_t client_id, std::shared_ptr<Peer> peer) {
  verbs::QueuePair& qp = *peer->qp;
  uint64_t wr_id = 1;
  for (int i = 0; i < kServerReceiveDepth; ++i) {
    qp.PostRecv(wr_id++, kMessageSize);
  }
  while (std::optional<verbs::Completion> c = qp.recv_cq().WaitPoll()) {
    qp.PostRecv(wr_id++, kMessageSize);
    if (!c->ok()) continue;
    absl::StatusOr<Message> message = DecodeMessage(c->payload);
    if (!message.ok()) continue;
    message->client_id = client_id;
    Deliver(pool_.Process([&] { return manager_.Handle(*message); }));
  }
}

void SendRecvFrontend::Deliver(const std::vector<Reply>& replies) {
  for (const Reply& reply : replies) {
    std::shared_ptr<Peer> target;
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = peers_.find(reply.to_client);
      if (it == peers_.end()) continue;
      target = it->second;
    }
    const auto bytes = EncodeMessage(reply.message);
    std::lock_guard<std::mutex> lock(target->send_mu);
    (void)SendWithRetry(*target->qp, bytes);
  }
}

absl::Status SendRecvFrontendClient::Exchange(MessageOp op, uint32_t item,
                                              MessageOp want) {
  const uint64_t request_id = next_request_id_++;
  // The reply can arrive before Send returns, so its receive goes first.
  qp_->PostRecv(request_id, kMessageSize);
  const auto bytes =
      EncodeMessage(Message{op, client_id_, item, request_id});
  verbs::Completion sent = SendWithRetry(*qp_, bytes);
  if (!sent.ok()) {
    return absl::UnavailableError(absl::StrCat(
        "send failed: ", verbs::WcStatusName(sent.status)));
  }
  std::optional<verbs::Completion> got = qp_->recv_cq().WaitPoll();
  if (!got.has_value()) return absl::UnavailableError("connection closed");
  if (!got->ok()) {
    return absl::UnavailableError(absl::StrCat(
        "receive failed: ", verbs::WcStatusName(got->status)));
  }
  absl::StatusOr<Message> reply = DecodeMessage(got->payload);
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

absl::Status SendRecvFrontendClient::Acquire(uint32_t item, LockMode mode) {
  return Exchange(mode == LockMode::kShared ? MessageOp::kAcquireShared
                                            : MessageOp::kAcquireExclusive,
                  item, MessageOp::kGrant);
}

absl::Status SendRecvFrontendClient::Release(uint32_t item) {
  return Exchange(MessageOp::kRelease, item, MessageOp::kAck);
}

}  // namespace dlm::server
