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

#include "dlm/verbs/memory_region.h"

#include <algorithm>

#include "absl/strings/str_cat.h"

namespace dlm::verbs {
namespace {

constexpr uint64_t kWordBytes = 8;
constexpr uint64_t kMaxRegionLength = uint64_t{1} << 32;

uint64_t ByteMask(uint64_t first, uint64_t count) {
  if (count == kWordBytes) return ~uint64_t{0};
  return ((uint64_t{1} << (8 * count)) - 1) << (8 * first);
}

}  // namespace

MemoryRegion::MemoryRegion(uint32_t id, uint64_t length)
    : id_(id),
      length_(length),
      words_(new std::atomic<uint64_t>[(length + kWordBytes - 1) /
                                       kWordBytes]) {
  const uint64_t n = (length + kWordBytes - 1) / kWordBytes;
  for (uint64_t i = 0; i < n; ++i) {
    words_[i].store(0, std::memory_order_relaxed);
  }
}

absl::Status MemoryRegion::CheckRange(uint64_t offset, uint64_t length) const {
  if (length == 0) {
    return absl::InvalidArgumentError("zero-length access");
  }
  if (offset > length_ || length > length_ - offset) {
    return absl::OutOfRangeError(
        absl::StrCat("access [", offset, ", ", offset + length,
                     ") outside region ", id_, " of ", length_, " bytes"));
  }
  return absl::OkStatus();
}

absl::Status MemoryRegion::CheckAtomic(uint64_t offset) const {
  if (offset % kWordBytes != 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("atomic at offset ", offset, " is not 8-byte aligned"));
  }
  return CheckRange(offset, kWordBytes);
}

absl::StatusOr<std::vector<uint8_t>> MemoryRegion::Read(
    uint64_t offset, uint64_t length) const {
  if (absl::Status s = CheckRange(offset, length); !s.ok()) return s;
  std::vector<uint8_t> out;
  out.reserve(length);
  uint64_t pos = offset;
  const uint64_t end = offset + length;
  while (pos < end) {
    const uint64_t word_index = pos / kWordBytes;
    const uint64_t first = pos % kWordBytes;
    const uint64_t count = std::min(kWordBytes - first, end - pos);
    const uint64_t word = words_[word_index].load(std::memory_order_seq_cst);
    for (uint64_t b = first; b < first + count; ++b) {
      out.push_back(static_cast<uint8_t>(word >> (8 * b)));
    }
    pos += count;
  }
  return out;
}

absl::Status MemoryRegion::Write(uint64_t offset,
                                 std::span<const uint8_t> bytes) {
  if (absl::Status s = CheckRange(offset, bytes.size()); !s.ok()) return s;
  uint64_t pos = offset;
  size_t consumed = 0;
  while (consumed < bytes.size()) {
    const uint64_t word_index = pos / kWordBytes;
    const uint64_t first = pos % kWordBytes;
    const uint64_t count =
        std::min<uint64_t>(kWordBytes - first, bytes.size() - consumed);
    uint64_t incoming = 0;
    for (uint64_t b = 0; b < count; ++b) {
      incoming |= static_cast<uint64_t>(bytes[consumed + b]) << (8 * (first + b));
    }
    std::atomic<uint64_t>& word = words_[word_index];
    if (count == kWordBytes) {
      word.store(incoming, std::memory_order_seq_cst);
    } else {
      const uint64_t mask = ByteMask(first, count);
      uint64_t current = word.load(std::memory_order_relaxed);
      while (!word.compare_exchange_weak(current, (current & ~mask) | incoming,
                                         std::memory_order_seq_cst)) {
      }
    }
    pos += count;
    consumed += count;
  }
  return absl::OkStatus();
}

absl::StatusOr<uint64_t> MemoryRegion::CompareSwap(uint64_t offset,
                                                   uint64_t expected,
                                                   uint64_t swap) {
  if (absl::Status s = CheckAtomic(offset); !s.ok()) return s;
  uint64_t old = expected;
  words_[offset / kWordBytes].compare_exchange_strong(
      old, swap, std::memory_order_seq_cst);
  return old;
}

absl::StatusOr<uint64_t> MemoryRegion::FetchAdd(uint64_t offset,
                                                uint64_t addend) {
  if (absl::Status s = CheckAtomic(offset); !s.ok()) return s;
  return words_[offset / kWordBytes].fetch_add(addend,
                                               std::memory_order_seq_cst);
}

uint64_t MemoryRegion::LoadWord(uint64_t offset) const {
  return words_[offset / kWordBytes].load(std::memory_order_seq_cst);
}

void MemoryRegion::StoreWord(uint64_t offset, uint64_t value) {
  words_[offset / kWordBytes].store(value, std::memory_order_seq_cst);
}

absl::StatusOr<std::shared_ptr<MemoryRegion>> RegionRegistry::Register(
    uint64_t length) {
  if (length == 0) {
    return absl::InvalidArgumentError("cannot register a zero-length region");
  }
  if (length > kMaxRegionLength) {
    return absl::InvalidArgumentError(
        absl::StrCat("region of ", length, " bytes is too large"));
  }
  std::lock_guard<std::mutex> lock(mu_);
  auto region = std::make_shared<MemoryRegion>(next_id_++, length);
  regions_.emplace(region->id(), region);
  return region;
}

std::shared_ptr<MemoryRegion> RegionRegistry::Find(uint32_t region_id) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = regions_.find(region_id);
  return it == regions_.end() ? nullptr : it->second;
}

}  // namespace dlm::verbs
