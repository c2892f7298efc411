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

#ifndef DLM_VERBS_NODE_H_
#define DLM_VERBS_NODE_H_

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>

#include "absl/status/statusor.h"
#include "dlm/verbs/memory_region.h"
#include "dlm/verbs/queue_pair.h"
#include "dlm/verbs/types.h"

namespace dlm::verbs {

// What a connecting peer learns from the host during connection setup.
struct ConnectInfo {
  // Dense, starting at 1, in connection order.
  uint32_t peer_id = 0;
  // The exported region, or 0/0 if the host exports none.
  uint32_t region_id = 0;
  uint64_t region_length = 0;
};

struct Connection {
  std::shared_ptr<QueuePair> qp;
  ConnectInfo info;
};

// A host on the emulated fabric: its registered memory plus the emulated
// NIC logic that executes incoming verbs. Execute() only touches registered
// memory and receive queues; it never calls lock-manager code, which is what
// lets one-sided verbs bypass the host application.
class Node {
 public:
  static constexpr uint32_t kMaxPeers = 1u << 16;

  Node() = default;
  ~Node();

  Node(const Node&) = delete;
  Node& operator=(const Node&) = delete;

  absl::StatusOr<std::shared_ptr<MemoryRegion>> RegisterRegion(uint64_t length);
  std::shared_ptr<MemoryRegion> FindRegion(uint32_t region_id) const;

  // Advertises `region` to peers that connect afterwards.
  void Export(const MemoryRegion& region);
  ConnectInfo exported() const;

  // Passive-side execution of one incoming verb. `target` is the local queue
  // pair of the connection the verb arrived on (needed for SEND).
  VerbReply Execute(const VerbRequest& request, QueuePair* target);

  // Connection management for transports.
  absl::StatusOr<uint32_t> AssignPeerId();
  std::shared_ptr<QueuePair> NewQueuePair();
  // Makes a fully connected local queue pair visible to Accept().
  void Enqueue(std::shared_ptr<QueuePair> qp, uint32_t peer_id);

  // Blocks until a peer connects; nullopt once Shutdown() was called. The
  // returned info carries the peer's id.
  std::optional<Connection> Accept();
  void Shutdown();

  uint64_t executed_verbs() const {
    return executed_.load(std::memory_order_relaxed);
  }

 private:
  RegionRegistry regions_;
  mutable std::mutex mu_;
  std::condition_variable accept_cv_;
  std::deque<Connection> accept_queue_;
  bool shutdown_ = false;
  uint32_t next_peer_id_ = 1;
  uint32_t next_qp_id_ = 1;
  ConnectInfo exported_;
  std::atomic<uint64_t> executed_{0};
};

}  // namespace dlm::verbs

#endif  // DLM_VERBS_NODE_H_
