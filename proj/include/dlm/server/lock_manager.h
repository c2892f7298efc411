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

#ifndef DLM_SERVER_LOCK_MANAGER_H_
#define DLM_SERVER_LOCK_MANAGER_H_

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <vector>

#include "dlm/checker/trace.h"
#include "dlm/common/types.h"
#include "dlm/server/item_queue.h"
#include "dlm/server/message.h"

namespace dlm::server {

struct LockRequest {
  enum class Op : uint8_t { kAcquire, kRelease };

  uint64_t request_id = 0;
  uint32_t client_id = 0;
  uint32_t item_id = 0;
  LockMode mode = LockMode::kExclusive;  // ignored for kRelease
  Op op = Op::kAcquire;
};

// A message the frontend must deliver to `to_client`.
struct Reply {
  uint32_t to_client = 0;
  Message message;

  friend bool operator==(const Reply&, const Reply&) = default;
};

// Frontend-independent core of the centralized lock manager: an array of
// per-item FIFO queues, each behind its own mutex. Handlers for different
// items never contend and no handler holds two item mutexes. Replies are
// returned rather than sent, so the caller sends them outside the mutex.
//
// When a sink is attached every state change is recorded under the item
// mutex, with per-item timestamps made strictly increasing, so the trace
// reflects the queue's exact order.
class LockManager {
 public:
  explicit LockManager(uint32_t n_items, checker::TraceSink* sink = nullptr);

  LockManager(const LockManager&) = delete;
  LockManager& operator=(const LockManager&) = delete;

  // Queues the request and runs GrantScan. Every newly granted client gets a
  // GRANT, including the requester when granted immediately. Unknown item or
  // a client already holding/waiting on the item gets an ERROR.
  std::vector<Reply> HandleAcquire(const LockRequest& request);
  // ACK to the releaser, then GRANTs to whoever GrantScan admits. Releasing
  // an item the client does not hold gets an ERROR.
  std::vector<Reply> HandleRelease(const LockRequest& request);
  // Dispatches an incoming wire message.
  std::vector<Reply> Handle(const Message& message);

  uint32_t n_items() const { return n_items_; }
  // Copy of an item's state, taken under its mutex.
  ItemQueue Snapshot(uint32_t item) const;
  size_t total_pending() const;

  uint64_t grants_issued() const { return grants_.load(); }
  uint64_t releases_processed() const { return releases_.load(); }

 private:
  struct Slot {
    mutable std::mutex mu;
    ItemQueue queue;
    int64_t last_stamp = 0;
  };

  void Record(Slot& slot, uint32_t client, uint32_t item, checker::TraceOp op,
              LockMode mode, checker::Outcome outcome);
  static Reply ErrorReply(const LockRequest& request);

  const uint32_t n_items_;
  std::unique_ptr<Slot[]> slots_;
  checker::TraceSink* sink_;
  std::atomic<uint64_t> grants_{0};
  std::atomic<uint64_t> releases_{0};
};

}  // namespace dlm::server

#endif  // DLM_SERVER_LOCK_MANAGER_H_
