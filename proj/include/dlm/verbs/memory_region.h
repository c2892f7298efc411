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

#ifndef DLM_VERBS_MEMORY_REGION_H_
#define DLM_VERBS_MEMORY_REGION_H_

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace dlm::verbs {

// Registered memory, addressable at byte granularity. Bytes are stored in
// 8-byte words; byte k of word w is bits [8k, 8k+8) of the word, so the
// layout is little-endian independent of the host.
//
// Every access goes through the containing word's atomicity domain: atomics
// are single RMW operations, partial-word WRITEs are CAS-merged into the
// word, and READs snapshot each word once. A 4-byte READ or WRITE of either
// half of a word is therefore atomic with respect to CAS/FA on that word.
class MemoryRegion {
 public:
  MemoryRegion(uint32_t id, uint64_t length);

  MemoryRegion(const MemoryRegion&) = delete;
  MemoryRegion& operator=(const MemoryRegion&) = delete;

  uint32_t id() const { return id_; }
  uint64_t length() const { return length_; }

  absl::StatusOr<std::vector<uint8_t>> Read(uint64_t offset,
                                            uint64_t length) const;
  absl::Status Write(uint64_t offset, std::span<const uint8_t> bytes);
  // Both atomics return the pre-operation word.
  absl::StatusOr<uint64_t> CompareSwap(uint64_t offset, uint64_t expected,
                                       uint64_t swap);
  absl::StatusOr<uint64_t> FetchAdd(uint64_t offset, uint64_t addend);

  // Host-local word access for the owner of the memory (inspection, test
  // setup). Offset must be 8-byte aligned and in bounds.
  uint64_t LoadWord(uint64_t offset) const;
  void StoreWord(uint64_t offset, uint64_t value);

 private:
  absl::Status CheckRange(uint64_t offset, uint64_t length) const;
  absl::Status CheckAtomic(uint64_t offset) const;

  const uint32_t id_;
  const uint64_t length_;
  std::unique_ptr<std::atomic<uint64_t>[]> words_;
};

class RegionRegistry {
 public:
  // Returns a zero-initialized region. Zero length is rejected.
  absl::StatusOr<std::shared_ptr<MemoryRegion>> Register(uint64_t length);
  std::shared_ptr<MemoryRegion> Find(uint32_t region_id) const;

 private:
  mutable std::mutex mu_;
  uint32_t next_id_ = 1;
  std::map<uint32_t, std::shared_ptr<MemoryRegion>> regions_;
};

}  // namespace dlm::verbs

#endif  // DLM_VERBS_MEMORY_REGION_H_
