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

#ifndef DLM_SERVER_ITEM_QUEUE_H_
#define DLM_SERVER_ITEM_QUEUE_H_

#include <cstdint>
#include <deque>
#include <map>
#include <vector>

#include "dlm/common/types.h"

namespace dlm::server {

struct QueuedRequest {
  uint32_t client_id = 0;
  LockMode mode = LockMode::kExclusive;
  uint64_t request_id = 0;

  friend bool operator==(const QueuedRequest&, const QueuedRequest&) = default;
};

// Lock state of one item: requests waiting in arrival order, and the current
// holders. Holders are either one EXCLUSIVE client or any number of SHARED
// clients.
struct ItemQueue {
  std::deque<QueuedRequest> pending;
  std::map<uint32_t, QueuedRequest> granted;  // by client id

  bool HasExclusiveHolder() const;
  bool Holds(uint32_t client_id) const { return granted.contains(client_id); }
  bool IsWaiting(uint32_t client_id) const;
};

// Moves grantable requests from the head of `queue.pending` into
// `queue.granted` and returns them in grant order. Strict FIFO:
//   - no holders and an EXCLUSIVE head: grant the head alone;
//   - a SHARED head and no EXCLUSIVE holder: grant the maximal run of
//     consecutive SHARED requests at the head;
//   - otherwise nothing.
// A SHARED request queued behind an EXCLUSIVE one waits even while SHARED
// holders exist. Caller holds the item's mutex.
std::vector<QueuedRequest> GrantScan(ItemQueue& queue);

}  // namespace dlm::server

#endif  // DLM_SERVER_ITEM_QUEUE_H_
