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

#include "dlm/verbs/tcp.h"

#include <array>
#include <utility>
#include <vector>

#include "absl/strings/str_cat.h"
#include "dlm/common/clock.h"
#include "dlm/common/endian.h"
#include "dlm/verbs/wire.h"

namespace dlm::verbs {
namespace {

constexpr size_t kHelloSize = 4 + 1 + 8;
constexpr size_t kAcceptSize = 4 + 4 + 8 + 8;
constexpr uint8_t kForwardChannel = 0;
constexpr uint8_t kReverseChannel = 1;

std::array<uint8_t, kHelloSize> EncodeHello(uint8_t channel, uint64_t token) {
  std::array<uint8_t, kHelloSize> out;
  StoreLittleEndian(out.data(), kTcpHelloMagic);
  out[4] = channel;
  StoreLittleEndian(out.data() + 5, token);
  return out;
}

}  // namespace

struct TcpAgent::State {
  Fd fd;
  std::shared_ptr<Node> node;
  std::weak_ptr<QueuePair> qp;
};

TcpAgent::TcpAgent(Fd inbound, std::shared_ptr<Node> node,
                   std::weak_ptr<QueuePair> qp)
    : state_(std::make_shared<State>(
          State{std::move(inbound), std::move(node), std::move(qp)})) {
  // The thread owns a reference to the state, never to `this`: the agent may
  // be destroyed from its own thread when it drops the last queue-pair ref.
  thread_ = std::thread([state = state_] {
    std::array<uint8_t, kVerbHeaderSize> header;
    while (ReadExact(state->fd, header).ok()) {
      absl::StatusOr<VerbRequest> request = ParseVerbHeader(header);
      VerbReply reply;
      if (!request.ok()) {
        reply.status = WcStatus::kInvalidRequest;
        (void)WriteAll(state->fd, EncodeReplyFrame(reply));
        break;  // framing is lost
      }
      if (CarriesPayload(request->kind)) {
        request->payload.resize(request->length);
        if (!ReadExact(state->fd, request->payload).ok()) break;
      }
      {
        std::shared_ptr<QueuePair> target = state->qp.lock();
        reply = state->node->Execute(*request, target.get());
      }
      if (!WriteAll(state->fd, EncodeReplyFrame(reply)).ok()) break;
    }
  });
}

TcpAgent::~TcpAgent() { Stop(); }

void TcpAgent::Stop() {
  state_->fd.Shutdown();
  if (!thread_.joinable()) return;
  if (thread_.get_id() == std::this_thread::get_id()) {
    thread_.detach();
  } else {
    thread_.join();
  }
}

TcpLink::TcpLink(Fd outbound, std::unique_ptr<TcpAgent> inbound,
                 LinkOptions options)
    : outbound_(std::move(outbound)),
      inbound_(std::move(inbound)),
      options_(options) {}

TcpLink::~TcpLink() {
  outbound_.Shutdown();
  inbound_.reset();
}

VerbReply TcpLink::Transmit(const VerbRequest& request) {
  std::lock_guard<std::mutex> lock(mu_);
  VerbReply reply;
  reply.status = WcStatus::kTransportError;
  Delay(options_.one_way_latency);
  if (!WriteAll(outbound_, EncodeVerbFrame(request)).ok()) return reply;
  std::array<uint8_t, kReplyHeaderSize> header;
  if (!ReadExact(outbound_, header).ok()) return reply;
  auto parsed = ParseReplyHeader(header);
  if (!parsed.ok()) return reply;
  std::vector<uint8_t> payload(parsed->second);
  if (!ReadExact(outbound_, payload).ok()) return reply;
  Delay(options_.one_way_latency);
  reply.status = parsed->first;
  reply.payload = std::move(payload);
  return reply;
}

TcpVerbsServer::TcpVerbsServer(std::shared_ptr<Node> node, LinkOptions options)
    : node_(std::move(node)), options_(options) {}

TcpVerbsServer::~TcpVerbsServer() { Stop(); }

absl::Status TcpVerbsServer::Bind(uint16_t port) {
  absl::StatusOr<Fd> listener = ListenTcp(port);
  if (!listener.ok()) return listener.status();
  absl::StatusOr<uint16_t> bound = LocalPort(*listener);
  if (!bound.ok()) return bound.status();
  listener_ = *std::move(listener);
  port_ = *bound;
  return absl::OkStatus();
}

void TcpVerbsServer::Start() {
  accept_thread_ = std::thread([this] { AcceptLoop(); });
}

void TcpVerbsServer::Stop() {
  stopping_ = true;
  listener_.Shutdown();
  if (accept_thread_.joinable()) accept_thread_.join();
  listener_.Close();
  std::map<uint64_t, Pending> pending;
  {
    std::lock_guard<std::mutex> lock(mu_);
    pending.swap(pending_);
  }
  pending.clear();
}

void TcpVerbsServer::AcceptLoop() {
  while (!stopping_) {
    absl::StatusOr<Fd> socket = AcceptTcp(listener_);
    if (!socket.ok()) break;
    Handshake(*std::move(socket));
  }
}

void TcpVerbsServer::Handshake(Fd socket) {
  std::array<uint8_t, kHelloSize> hello;
  if (!ReadExact(socket, hello).ok()) return;
  if (LoadLittleEndian<uint32_t>(hello.data()) != kTcpHelloMagic) return;
  const uint8_t channel = hello[4];
  const uint64_t token = LoadLittleEndian<uint64_t>(hello.data() + 5);

  if (channel == kForwardChannel) {
    absl::StatusOr<uint32_t> peer_id = node_->AssignPeerId();
    if (!peer_id.ok()) return;  // closing the socket refuses the peer
    std::shared_ptr<QueuePair> qp = node_->NewQueuePair();
    const ConnectInfo exported = node_->exported();
    uint64_t new_token;
    {
      std::lock_guard<std::mutex> lock(mu_);
      new_token = next_token_++;
    }
    std::array<uint8_t, kAcceptSize> accept;
    StoreLittleEndian(accept.data(), *peer_id);
    StoreLittleEndian(accept.data() + 4, exported.region_id);
    StoreLittleEndian(accept.data() + 8, exported.region_length);
    StoreLittleEndian(accept.data() + 16, new_token);
    if (!WriteAll(socket, accept).ok()) return;
    auto agent = std::make_unique<TcpAgent>(std::move(socket), node_, qp);
    std::lock_guard<std::mutex> lock(mu_);
    pending_.emplace(new_token,
                     Pending{std::move(qp), *peer_id, std::move(agent)});
    return;
  }

  if (channel != kReverseChannel) return;
  Pending entry;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = pending_.find(token);
    if (it == pending_.end()) return;
    entry = std::move(it->second);
    pending_.erase(it);
  }
  const std::array<uint8_t, 1> ack = {1};
  if (!WriteAll(socket, ack).ok()) return;
  entry.qp->AttachLink(std::make_unique<TcpLink>(
      std::move(socket), std::move(entry.forward_agent), options_));
  node_->Enqueue(std::move(entry.qp), entry.peer_id);
}

TcpConnector::TcpConnector(std::string host, uint16_t port,
                           LinkOptions options)
    : host_(std::move(host)),
      port_(port),
      options_(options),
      local_(std::make_shared<Node>()) {}

absl::StatusOr<Connection> TcpConnector::Connect() {
  absl::StatusOr<Fd> forward = ConnectTcp(host_, port_);
  if (!forward.ok()) return forward.status();
  if (absl::Status s = WriteAll(*forward, EncodeHello(kForwardChannel, 0));
      !s.ok()) {
    return s;
  }
  std::array<uint8_t, kAcceptSize> accept;
  if (absl::Status s = ReadExact(*forward, accept); !s.ok()) {
    return absl::UnavailableError(
        absl::StrCat("host refused queue pair: ", s.message()));
  }
  ConnectInfo info;
  info.peer_id = LoadLittleEndian<uint32_t>(accept.data());
  info.region_id = LoadLittleEndian<uint32_t>(accept.data() + 4);
  info.region_length = LoadLittleEndian<uint64_t>(accept.data() + 8);
  const uint64_t token = LoadLittleEndian<uint64_t>(accept.data() + 16);
  if (info.peer_id == 0) {
    return absl::DataLossError("host sent an invalid peer id");
  }

  absl::StatusOr<Fd> reverse = ConnectTcp(host_, port_);
  if (!reverse.ok()) return reverse.status();
  if (absl::Status s = WriteAll(*reverse, EncodeHello(kReverseChannel, token));
      !s.ok()) {
    return s;
  }
  std::array<uint8_t, 1> ack;
  if (absl::Status s = ReadExact(*reverse, ack); !s.ok()) return s;

  std::shared_ptr<QueuePair> qp = local_->NewQueuePair();
  auto agent = std::make_unique<TcpAgent>(*std::move(reverse), local_, qp);
  qp->AttachLink(
      std::make_unique<TcpLink>(*std::move(forward), std::move(agent), options_));
  return Connection{std::move(qp), info};
}

}  // namespace dlm::verbs
