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

#include "dlm/verbs/node.h"

#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "dlm/common/endian.h"

namespace dlm::verbs {
namespace {

WcStatus ToWcStatus(const absl::Status& status) {
  return status.ok() ? WcStatus::kSuccess : WcStatus::kLocalAccessError;
}

std::vector<uint8_t> WordBytes(uint64_t value) {
  std::vector<uint8_t> out(sizeof(uint64_t));
  StoreLittleEndian(out.data(), value);
  return out;
}

}  // namespace

Node::~Node() { Shutdown(); }

absl::StatusOr<std::shared_ptr<MemoryRegion>> Node::RegisterRegion(
    uint64_t length) {
  return regions_.Register(length);
}

std::shared_ptr<MemoryRegion> Node::FindRegion(uint32_t region_id) const {
  return regions_.Find(region_id);
}

void Node::Export(const MemoryRegion& region) {
  std::lock_guard<std::mutex> lock(mu_);
  exported_.region_id = region.id();
  exported_.region_length = region.length();
}

ConnectInfo Node::exported() const {
  std::lock_guard<std::mutex> lock(mu_);
  return exported_;
}

VerbReply Node::Execute(const VerbRequest& request, QueuePair* target) {
  executed_.fetch_add(1, std::memory_order_relaxed);
  VerbReply reply;
  if (request.kind == Opcode::kSend) {
    reply.status = target == nullptr ? WcStatus::kTransportError
                                     : target->DeliverSend(request.payload);
    return reply;
  }
  std::shared_ptr<MemoryRegion> region = regions_.Find(request.region_id);
  if (region == nullptr) {
    reply.status = WcStatus::kLocalAccessError;
    return reply;
  }
  switch (request.kind) {
    case Opcode::kRead: {
      auto bytes = region->Read(request.offset, request.length);
      reply.status = ToWcStatus(bytes.status());
      if (bytes.ok()) reply.payload = *std::move(bytes);
      break;
    }
    case Opcode::kWrite:
      reply.status =
          ToWcStatus(region->Write(request.offset, request.payload));
      break;
    case Opcode::kCompareSwap: {
      auto old = region->CompareSwap(request.offset, request.operand_a,
                                     request.operand_b);
      reply.status = ToWcStatus(old.status());
      if (old.ok()) reply.payload = WordBytes(*old);
      break;
    }
    case Opcode::kFetchAdd: {
      auto old = region->FetchAdd(request.offset, request.operand_a);
      reply.status = ToWcStatus(old.status());
      if (old.ok()) reply.payload = WordBytes(*old);
      break;
    }
    default:
      reply.status = WcStatus::kInvalidRequest;
  }
  return reply;
}

absl::StatusOr<uint32_t> Node::AssignPeerId() {
  std::lock_guard<std::mutex> lock(mu_);
  if (shutdown_) return absl::UnavailableError("node is shut down");
  if (next_peer_id_ > kMaxPeers) {
    return absl::ResourceExhaustedError(
        absl::StrCat("more than ", kMaxPeers, " peers"));
  }
  return next_peer_id_++;
}

std::shared_ptr<QueuePair> Node::NewQueuePair() {
  std::lock_guard<std::mutex> lock(mu_);
  return std::make_shared<QueuePair>(next_qp_id_++);
}

void Node::Enqueue(std::shared_ptr<QueuePair> qp, uint32_t peer_id) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (shutdown_) return;
    Connection conn{std::move(qp), exported_};
    conn.info.peer_id = peer_id;
    accept_queue_.push_back(std::move(conn));
  }
  accept_cv_.notify_one();
}

std::optional<Connection> Node::Accept() {
  std::unique_lock<std::mutex> lock(mu_);
  accept_cv_.wait(lock, [this] { return shutdown_ || !accept_queue_.empty(); });
  if (shutdown_) return std::nullopt;
  Connection conn = std::move(accept_queue_.front());
  accept_queue_.pop_front();
  return conn;
}

void Node::Shutdown() {
  std::deque<Connection> orphans;
  {
    std::lock_guard<std::mutex> lock(mu_);
    shutdown_ = true;
    orphans.swap(accept_queue_);
  }
  accept_cv_.notify_all();
  for (Connection& conn : orphans) conn.qp->Close();
}

}  // namespace dlm::verbs
