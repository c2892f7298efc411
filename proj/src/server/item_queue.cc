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

#include "dlm/server/item_queue.h"

#include <algorithm>

namespace dlm::server {

bool ItemQueue::HasExclusiveHolder() const {
  return std::any_of(granted.begin(), granted.end(), [](const auto& entry) {
    return entry.second.mode == LockMode::kExclusive;
  });
}

bool ItemQueue::IsWaiting(uint32_t client_id) const {
  return std::any_of(pending.begin(), pending.end(),
                     [&](const QueuedRequest& r) {
                       return r.client_id == client_id;
                     });
}

std::vector<QueuedRequest> GrantScan(ItemQueue& queue) {
  std::vector<QueuedRequest> grants;
  if (queue.pending.empty()) return grants;
  if (queue.pending.front().mode == LockMode::kExclusive) {
    if (queue.granted.empty()) {
      grants.push_back(queue.pending.front());
      queue.pending.pop_front();
    }
  } else if (!queue.HasExclusiveHolder()) {
    while (!queue.pending.empty() &&
           queue.pending.front().mode == LockMode::kShared) {
      grants.push_back(queue.pending.front());
      queue.pending.pop_front();
    }
  }
  for (const QueuedRequest& g : grants) queue.granted[g.client_id] = g;
  return grants;
}

}  // namespace dlm::server
