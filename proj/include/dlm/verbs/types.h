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

#ifndef DLM_VERBS_TYPES_H_
#define DLM_VERBS_TYPES_H_

#include <cstdint>
#include <string_view>
#include <vector>

namespace dlm::verbs {

// Values 1-5 double as the wire `verb_kind`.
enum class Opcode : uint8_t {
  kRead = 1,
  kWrite = 2,
  kCompareSwap = 3,
  kFetchAdd = 4,
  kSend = 5,
  kRecv = 6,
};

enum class WcStatus : uint8_t {
  kSuccess = 0,
  // Misaligned atomic, out-of-bounds access, or unknown region.
  kLocalAccessError = 1,
  // SEND arrived with no RECEIVE posted on the peer.
  kReceiverNotReady = 2,
  // SEND payload larger than the posted RECEIVE buffer.
  kLengthError = 3,
  kInvalidRequest = 4,
  kTransportError = 5,
};

const char* OpcodeName(Opcode op);
const char* WcStatusName(WcStatus status);

struct RemoteAddress {
  uint32_t region_id = 0;
  uint64_t offset = 0;
};

struct Completion {
  uint64_t wr_id = 0;
  Opcode opcode = Opcode::kRead;
  WcStatus status = WcStatus::kSuccess;
  // Old value (8 bytes LE) for atomics, read bytes for READ, message for RECV.
  std::vector<uint8_t> payload;

  bool ok() const { return status == WcStatus::kSuccess; }
  // Pre-operation value of an atomic. Zero if the payload is not 8 bytes.
  uint64_t old_value() const;
};

// One verb as it travels from the active to the passive side. Field-for-field
// the TCP wire frame.
struct VerbRequest {
  Opcode kind = Opcode::kRead;
  uint32_t region_id = 0;
  uint64_t offset = 0;
  uint32_t length = 0;
  // CAS: expected / swap. FA: addend / unused.
  uint64_t operand_a = 0;
  uint64_t operand_b = 0;
  // WRITE and SEND only.
  std::vector<uint8_t> payload;

  friend bool operator==(const VerbRequest&, const VerbRequest&) = default;
};

struct VerbReply {
  WcStatus status = WcStatus::kSuccess;
  std::vector<uint8_t> payload;

  friend bool operator==(const VerbReply&, const VerbReply&) = default;
};

}  // namespace dlm::verbs

#endif  // DLM_VERBS_TYPES_H_
