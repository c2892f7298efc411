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

#ifndef DLM_LOCKTABLE_LOCK_TABLE_H_
#define DLM_LOCKTABLE_LOCK_TABLE_H_

#include <cstdint>
#include <memory>

#include "absl/status/statusor.h"
#include "dlm/verbs/memory_region.h"
#include "dlm/verbs/node.h"
#include "dlm/verbs/types.h"

namespace dlm::locktable {

// A lock word is one little-endian u64:
//
//   bytes 0-3  shared count     (low 32 bits)
//   bytes 4-7  exclusive owner  (high 32 bits, 0 = none)
//
// so "the exclusive part" is the 4 bytes at word base + 4.
inline constexpr uint64_t kWordSize = 8;
inline constexpr uint64_t kSharedHalfOffset = 0;
inline constexpr uint64_t kExclusiveHalfOffset = 4;

// Adding this to a word decrements its shared half by one (mod 2^64).
inline constexpr uint64_t kDecrement = ~uint64_t{0};

// Client IDs are 1..kMaxClients. The cap keeps the shared count far below
// 2^32, where FA(+1) would carry into the owner half.
inline constexpr uint32_t kMaxClients = 1u << 16;
static_assert(kMaxClients == verbs::Node::kMaxPeers);

struct LockWord {
  uint32_t exclusive_owner = 0;
  uint32_t shared_count = 0;

  friend bool operator==(const LockWord&, const LockWord&) = default;
};

constexpr uint64_t Encode(uint32_t owner, uint32_t count) {
  return (static_cast<uint64_t>(owner) << 32) | count;
}

constexpr uint64_t Encode(LockWord word) {
  return Encode(word.exclusive_owner, word.shared_count);
}

constexpr LockWord Decode(uint64_t word) {
  return LockWord{static_cast<uint32_t>(word >> 32),
                  static_cast<uint32_t>(word)};
}

// Entry i of the table is the lock word at byte offset 8i of one registered
// region. A LockTable is either the host's table (Create) or a client's view
// of a remote one (Attach); only the former has region().
class LockTable {
 public:
  // Registers and exports an all-zero table of `item_count` words on `host`.
  static absl::StatusOr<LockTable> Create(verbs::Node& host,
                                          uint32_t item_count);
  // Remote view from what a connection advertised.
  static absl::StatusOr<LockTable> Attach(uint32_t region_id,
                                          uint64_t region_length);

  absl::StatusOr<uint64_t> WordOffset(uint32_t item) const;
  absl::StatusOr<verbs::RemoteAddress> WordAddress(uint32_t item) const;
  absl::StatusOr<verbs::RemoteAddress> ExclusiveHalfAddress(
      uint32_t item) const;

  uint32_t item_count() const { return item_count_; }
  uint32_t region_id() const { return region_id_; }

  // Host-side only; nullptr on an attached view.
  const std::shared_ptr<verbs::MemoryRegion>& region() const { return region_; }
  // Host-side inspection. Requires region() and a valid item.
  LockWord Peek(uint32_t item) const;

 private:
  LockTable(uint32_t region_id, uint32_t item_count,
            std::shared_ptr<verbs::MemoryRegion> region)
      : region_id_(region_id),
        item_count_(item_count),
        region_(std::move(region)) {}

  uint32_t region_id_;
  uint32_t item_count_;
  std::shared_ptr<verbs::MemoryRegion> region_;
};

}  // namespace dlm::locktable

#endif  // DLM_LOCKTABLE_LOCK_TABLE_H_
