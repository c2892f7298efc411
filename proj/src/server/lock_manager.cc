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

#include "dlm/server/lock_manager.h"

#include <algorithm>

#include "dlm/common/clock.h"

namespace dlm::server {

using checker::Outcome;
using checker::TraceOp;

LockManager::LockManager(uint32_t n_items, checker::TraceSink* sink)
    : n_items_(n_items), slots_(new Slot[n_items]), sink_(sink) {}

void LockManager::Record(Slot& slot, uint32_t client, uint32_t item,
                         TraceOp op, LockMode mode, Outcome outcome) {
  if (sink_ == nullptr) return;
  const int64_t stamp = std::max(MonotonicNanos(), slot.last_stamp + 1);
  slot.last_stamp = stamp;
  sink_->Record(checker::TraceEvent{stamp, client, item, op, mode, outcome});
}

Reply LockManager::ErrorReply(const LockRequest& request) {
  return Reply{request.client_id,
               Message{MessageOp::kError, request.client_id, request.item_id,
                       request.request_id}};
}

std::vector<Reply> LockManager::HandleAcquire(const LockRequest& request) {
  if (request.item_id >= n_items_) return {ErrorReply(request)};
  Slot& slot = slots_[request.item_id];
  std::vector<Reply> replies;
  {
    std::lock_guard<std::mutex> lock(slot.mu);
    ItemQueue& q = slot.queue;
    if (q.Holds(request.client_id) || q.IsWaiting(request.client_id)) {
      return {ErrorReply(request)};
    }
    q.pending.push_back(
        QueuedRequest{request.client_id, request.mode, request.request_id});
    Record(slot, request.client_id, request.item_id, TraceOp::kAcquire,
           request.mode, Outcome::kRequest);
    for (const QueuedRequest& g : GrantScan(q)) {
      Record(slot, g.client_id, request.item_id, TraceOp::kAcquire, g.mode,
             Outcome::kGrant);
      replies.push_back(Reply{g.client_id,
                              Message{MessageOp::kGrant, g.client_id,
                                      request.item_id, g.request_id}});
    }
  }
  grants_.fetch_add(replies.size());
  return replies;
}

std::vector<Reply> LockManager::HandleRelease(const LockRequest& request) {
  if (request.item_id >= n_items_) return {ErrorReply(request)};
  Slot& slot = slots_[request.item_id];
  std::vector<Reply> replies;
  {
    std::lock_guard<std::mutex> lock(slot.mu);
    ItemQueue& q = slot.queue;
    auto held = q.granted.find(request.client_id);
    if (held == q.granted.end()) return {ErrorReply(request)};
    const LockMode mode = held->second.mode;
    Record(slot, request.client_id, request.item_id, TraceOp::kRelease, mode,
           Outcome::kRequest);
    q.granted.erase(held);
    Record(slot, request.client_id, request.item_id, TraceOp::kRelease, mode,
           Outcome::kAck);
    replies.push_back(Reply{request.client_id,
                            Message{MessageOp::kAck, request.client_id,
                                    request.item_id, request.request_id}});
    for (const QueuedRequest& g : GrantScan(q)) {
      Record(slot, g.client_id, request.item_id, TraceOp::kAcquire, g.mode,
             Outcome::kGrant);
      replies.push_back(Reply{g.client_id,
                              Message{MessageOp::kGrant, g.client_id,
                                      request.item_id, g.request_id}});
    }
  }
  releases_.fetch_add(1);
  grants_.fetch_add(replies.size() - 1);
  return replies;
}

std::vector<Reply> LockManager::Handle(const Message& message) {
  LockRequest request{message.request_id, message.client_id, message.item_id,
                      LockMode::kExclusive, LockRequest::Op::kAcquire};
  switch (message.op) {
    case MessageOp::kAcquireShared:
      request.mode = LockMode::kShared;
      return HandleAcquire(request);
    case MessageOp::kAcquireExclusive:
      return HandleAcquire(request);
    case MessageOp::kRelease:
      request.op = LockRequest::Op::kRelease;
      return HandleRelease(request);
    default:
      return {ErrorReply(request)};
  }
}

ItemQueue LockManager::Snapshot(uint32_t item) const {
  std::lock_guard<std::mutex> lock(slots_[item].mu);
  return slots_[item].queue;
}

size_t LockManager::total_pending() const {
  size_t n = 0;
  for (uint32_t i = 0; i < n_items_; ++i) {
    std::lock_guard<std::mutex> lock(slots_[i].mu);
    n += slots_[i].queue.pending.size();
  }
  return n;
}

}  // namespace dlm::server
