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

#include "dlm/verbs/queue_pair.h"

#include <utility>

namespace dlm::verbs {

QueuePair::QueuePair(uint32_t qp_id) : id_(qp_id) {}

QueuePair::~QueuePair() { Close(); }

void QueuePair::AttachLink(std::unique_ptr<Link> link) {
  std::lock_guard<std::mutex> lock(link_mu_);
  link_ = std::move(link);
}

std::unique_ptr<Link> QueuePair::TakeLink() {
  std::lock_guard<std::mutex> lock(link_mu_);
  return std::move(link_);
}

void QueuePair::Execute(uint64_t wr_id, const VerbRequest& request) {
  posted_[static_cast<size_t>(request.kind)].fetch_add(
      1, std::memory_order_relaxed);
  Completion completion;
  completion.wr_id = wr_id;
  completion.opcode = request.kind;
  {
    std::lock_guard<std::mutex> lock(link_mu_);
    if (link_ == nullptr) {
      completion.status = WcStatus::kTransportError;
    } else {
      VerbReply reply = link_->Transmit(request);
      completion.status = reply.status;
      completion.payload = std::move(reply.payload);
    }
  }
  send_cq_.Push(std::move(completion));
}

void QueuePair::PostRead(uint64_t wr_id, RemoteAddress addr, uint32_t length) {
  VerbRequest r;
  r.kind = Opcode::kRead;
  r.region_id = addr.region_id;
  r.offset = addr.offset;
  r.length = length;
  Execute(wr_id, r);
}

void QueuePair::PostWrite(uint64_t wr_id, RemoteAddress addr,
                          std::span<const uint8_t> payload) {
  VerbRequest r;
  r.kind = Opcode::kWrite;
  r.region_id = addr.region_id;
  r.offset = addr.offset;
  r.length = static_cast<uint32_t>(payload.size());
  r.payload.assign(payload.begin(), payload.end());
  Execute(wr_id, r);
}

void QueuePair::PostCompareSwap(uint64_t wr_id, RemoteAddress addr,
                                uint64_t expected, uint64_t swap) {
  VerbRequest r;
  r.kind = Opcode::kCompareSwap;
  r.region_id = addr.region_id;
  r.offset = addr.offset;
  r.length = 8;
  r.operand_a = expected;
  r.operand_b = swap;
  Execute(wr_id, r);
}

void QueuePair::PostFetchAdd(uint64_t wr_id, RemoteAddress addr,
                             uint64_t addend) {
  VerbRequest r;
  r.kind = Opcode::kFetchAdd;
  r.region_id = addr.region_id;
  r.offset = addr.offset;
  r.length = 8;
  r.operand_a = addend;
  Execute(wr_id, r);
}

void QueuePair::PostSend(uint64_t wr_id, std::span<const uint8_t> payload) {
  VerbRequest r;
  r.kind = Opcode::kSend;
  r.length = static_cast<uint32_t>(payload.size());
  r.payload.assign(payload.begin(), payload.end());
  Execute(wr_id, r);
}

void QueuePair::PostRecv(uint64_t wr_id, uint32_t capacity) {
  posted_[static_cast<size_t>(Opcode::kRecv)].fetch_add(
      1, std::memory_order_relaxed);
  std::lock_guard<std::mutex> lock(recv_mu_);
  receive_queue_.push_back({wr_id, capacity});
}

Completion QueuePair::PostAndWait(const VerbRequest& request) {
  const uint64_t wr_id = next_wr_id_++;
  Execute(wr_id, request);
  std::optional<Completion> c = send_cq_.WaitPoll();
  if (!c.has_value()) {
    return Completion{wr_id, request.kind, WcStatus::kTransportError, {}};
  }
  return *std::move(c);
}

Completion QueuePair::Read(RemoteAddress addr, uint32_t length) {
  VerbRequest r;
  r.kind = Opcode::kRead;
  r.region_id = addr.region_id;
  r.offset = addr.offset;
  r.length = length;
  return PostAndWait(r);
}

Completion QueuePair::Write(RemoteAddress addr,
                            std::span<const uint8_t> payload) {
  VerbRequest r;
  r.kind = Opcode::kWrite;
  r.region_id = addr.region_id;
  r.offset = addr.offset;
  r.length = static_cast<uint32_t>(payload.size());
  r.payload.assign(payload.begin(), payload.end());
  return PostAndWait(r);
}

Completion QueuePair::CompareSwap(RemoteAddress addr, uint64_t expected,
                                  uint64_t swap) {
  VerbRequest r;
  r.kind = Opcode::kCompareSwap;
  r.region_id = addr.region_id;
  r.offset = addr.offset;
  r.length = 8;
  r.operand_a = expected;
  r.operand_b = swap;
  return PostAndWait(r);
}

Completion QueuePair::FetchAdd(RemoteAddress addr, uint64_t addend) {
  VerbRequest r;
  r.kind = Opcode::kFetchAdd;
  r.region_id = addr.region_id;
  r.offset = addr.offset;
  r.length = 8;
  r.operand_a = addend;
  return PostAndWait(r);
}

Completion QueuePair::Send(std::span<const uint8_t> payload) {
  VerbRequest r;
  r.kind = Opcode::kSend;
  r.length = static_cast<uint32_t>(payload.size());
  r.payload.assign(payload.begin(), payload.end());
  return PostAndWait(r);
}

WcStatus QueuePair::DeliverSend(std::span<const uint8_t> payload) {
  PostedRecv recv;
  {
    std::lock_guard<std::mutex> lock(recv_mu_);
    if (receive_queue_.empty()) return WcStatus::kReceiverNotReady;
    recv = receive_queue_.front();
    receive_queue_.pop_front();
  }
  Completion c;
  c.wr_id = recv.wr_id;
  c.opcode = Opcode::kRecv;
  if (payload.size() > recv.capacity) {
    c.status = WcStatus::kLengthError;
    recv_cq_.Push(std::move(c));
    return WcStatus::kLengthError;
  }
  c.payload.assign(payload.begin(), payload.end());
  recv_cq_.Push(std::move(c));
  return WcStatus::kSuccess;
}

size_t QueuePair::posted_receives() const {
  std::lock_guard<std::mutex> lock(recv_mu_);
  return receive_queue_.size();
}

uint64_t QueuePair::posted_count(Opcode op) const {
  return posted_[static_cast<size_t>(op)].load(std::memory_order_relaxed);
}

void QueuePair::Close() {
  std::unique_ptr<Link> link = TakeLink();
  send_cq_.Close();
  recv_cq_.Close();
  link.reset();
}

}  // namespace dlm::verbs
