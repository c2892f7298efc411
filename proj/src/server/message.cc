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

#include "dlm/server/message.h"

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "dlm/common/endian.h"

namespace dlm::server {

std::array<uint8_t, kMessageSize> EncodeMessage(const Message& message) {
  std::array<uint8_t, kMessageSize> out;
  out[0] = static_cast<uint8_t>(message.op);
  StoreLittleEndian(out.data() + 1, message.client_id);
  StoreLittleEndian(out.data() + 5, message.item_id);
  StoreLittleEndian(out.data() + 9, message.request_id);
  return out;
}

absl::StatusOr<Message> DecodeMessage(std::span<const uint8_t> bytes) {
  if (bytes.size() != kMessageSize) {
    return absl::InvalidArgumentError(absl::StrCat(
        "lock message must be ", kMessageSize, " bytes, got ", bytes.size()));
  }
  if (bytes[0] < static_cast<uint8_t>(MessageOp::kAcquireShared) ||
      bytes[0] > static_cast<uint8_t>(MessageOp::kError)) {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown message op ", bytes[0]));
  }
  Message m;
  m.op = static_cast<MessageOp>(bytes[0]);
  m.client_id = LoadLittleEndian<uint32_t>(bytes.data() + 1);
  m.item_id = LoadLittleEndian<uint32_t>(bytes.data() + 5);
  m.request_id = LoadLittleEndian<uint64_t>(bytes.data() + 9);
  return m;
}

}  // namespace dlm::server
