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

#ifndef DLM_SERVER_MESSAGE_H_
#define DLM_SERVER_MESSAGE_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

#include "absl/status/statusor.h"

namespace dlm::server {

// Client<->server message, 17 bytes little-endian:
//   [u8 op][u32 client_id][u32 item_id][u64 request_id]
enum class MessageOp : uint8_t {
  kAcquireShared = 1,
  kAcquireExclusive = 2,
  kRelease = 3,
  kGrant = 4,
  kAck = 5,
  kError = 6,
};

inline constexpr size_t kMessageSize = 17;

struct Message {
  MessageOp op = MessageOp::kAck;
  uint32_t client_id = 0;
  uint32_t item_id = 0;
  uint64_t request_id = 0;

  friend bool operator==(const Message&, const Message&) = default;
};

std::array<uint8_t, kMessageSize> EncodeMessage(const Message& message);
absl::StatusOr<Message> DecodeMessage(std::span<const uint8_t> bytes);

}  // namespace dlm::server

#endif  // DLM_SERVER_MESSAGE_H_
