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

#ifndef DLM_VERBS_WIRE_H_
#define DLM_VERBS_WIRE_H_

// Frame layout of the TCP-emulated transport, all integers little-endian:
//
//   verb frame  = [u8 verb_kind][u32 region_id][u64 offset][u32 length]
//                 [u64 operand_a][u64 operand_b][payload, WRITE/SEND only]
//   reply frame = [u8 status][u32 length][payload]

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "dlm/verbs/types.h"

namespace dlm::verbs {

inline constexpr size_t kVerbHeaderSize = 1 + 4 + 8 + 4 + 8 + 8;
inline constexpr size_t kReplyHeaderSize = 1 + 4;
inline constexpr uint32_t kMaxFramePayload = 1u << 20;

inline bool CarriesPayload(Opcode kind) {
  return kind == Opcode::kWrite || kind == Opcode::kSend;
}

std::vector<uint8_t> EncodeVerbFrame(const VerbRequest& request);

// Parses the fixed header. The returned request has an empty payload; when
// CarriesPayload(kind) the caller reads `length` more bytes.
absl::StatusOr<VerbRequest> ParseVerbHeader(std::span<const uint8_t> header);

// Whole-frame decode (header plus payload).
absl::StatusOr<VerbRequest> DecodeVerbFrame(std::span<const uint8_t> frame);

std::vector<uint8_t> EncodeReplyFrame(const VerbReply& reply);

// Returns (status, payload length).
absl::StatusOr<std::pair<WcStatus, uint32_t>> ParseReplyHeader(
    std::span<const uint8_t> header);

absl::StatusOr<VerbReply> DecodeReplyFrame(std::span<const uint8_t> frame);

}  // namespace dlm::verbs

#endif  // DLM_VERBS_WIRE_H_
