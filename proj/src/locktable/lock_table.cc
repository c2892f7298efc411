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

#include "dlm/locktable/lock_table.h"

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace dlm::locktable {

absl::StatusOr<LockTable> LockTable::Create(verbs::Node& host,
                                            uint32_t item_count) {
  if (item_count == 0) {
    return absl::InvalidArgumentError("lock table needs at least one item");
  }
  auto region = host.RegisterRegion(kWordSize * item_count);
  if (!region.ok()) return region.status();
  host.Export(**region);
  const uint32_t id = (*region)->id();
  return LockTable(id, item_count, *std::move(region));
}

absl::StatusOr<LockTable> LockTable::Attach(uint32_t region_id,
                                            uint64_t region_length) {
  if (region_id == 0 || region_length == 0) {
    return absl::FailedPreconditionError("host exports no lock table");
  }
  if (region_length % kWordSize != 0) {
    return absl::InvalidArgumentError(absl::StrCat(
        "region length ", region_length, " is not a whole number of words"));
  }
  return LockTable(region_id, static_cast<uint32_t>(region_length / kWordSize),
                   nullptr);
}

absl::StatusOr<uint64_t> LockTable::WordOffset(uint32_t item) const {
  if (item >= item_count_) {
    return absl::InvalidArgumentError(absl::StrCat(
        "item ", item, " out of range for ", item_count_, " lock words"));
  }
  return kWordSize * item;
}

absl::StatusOr<verbs::RemoteAddress> LockTable::WordAddress(
    uint32_t item) const {
  absl::StatusOr<uint64_t> offset = WordOffset(item);
  if (!offset.ok()) return offset.status();
  return verbs::RemoteAddress{region_id_, *offset};
}

absl::StatusOr<verbs::RemoteAddress> LockTable::ExclusiveHalfAddress(
    uint32_t item) const {
  absl::StatusOr<uint64_t> offset = WordOffset(item);
  if (!offset.ok()) return offset.status();
  return verbs::RemoteAddress{region_id_, *offset + kExclusiveHalfOffset};
}

LockWord LockTable::Peek(uint32_t item) const {
  return Decode(region_->LoadWord(kWordSize * item));
}

}  // namespace dlm::locktable
