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

#include "dlm/verbs/wire.h"

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "dlm/common/endian.h"

namespace dlm::verbs {

const char* OpcodeName(Opcode op) {
  switch (op) {
    case Opcode::kRead:
      return "READ";
    case Opcode::kWrite:
      return "WRITE";
    case Opcode::kCompareSwap:
      return "CAS";
    case Opcode::kFetchAdd:
      return "FA";
    case Opcode::kSend:
      return "SEND";
    case Opcode::kRecv:
      return "RECV";
  }
  return "UNKNOWN";
}

const char* WcStatusName(WcStatus status) {
  switch (status) {
    case WcStatus::kSuccess:
      return "success";
    case WcStatus::kLocalAccessError:
      return "local access error";
    case WcStatus::kReceiverNotReady:
      return "receiver not ready";
    case WcStatus::kLengthError:
      return "length error";
    case WcStatus::kInvalidRequest:
      return "invalid request";
    case WcStatus::kTransportError:
      return "transport error";
  }
  return "unknown";
}

uint64_t Completion::old_value() const {
  if (payload.size() != sizeof(uint64_t)) return 0;
  return LoadLittleEndian<uint64_t>(payload.data());
}

std::vector<uint8_t> EncodeVerbFrame(const VerbRequest& request) {
  std::vector<uint8_t> out;
  out.reserve(kVerbHeaderSize + request.payload.size());
  ByteWriter w(out);
  const uint32_t length = CarriesPayload(request.kind)
                              ? static_cast<uint32_t>(request.payload.size())
                              : request.length;
  w.Put(static_cast<uint8_t>(request.kind))
      .Put(request.region_id)
      .Put(request.offset)
      .Put(length)
      .Put(request.operand_a)
      .Put(request.operand_b);
  if (CarriesPayload(request.kind)) w.PutBytes(request.payload);
  return out;
}

absl::StatusOr<VerbRequest> ParseVerbHeader(std::span<const uint8_t> header) {
  if (header.size() < kVerbHeaderSize) {
    return absl::InvalidArgumentError(
        absl::StrCat("verb header needs ", kVerbHeaderSize, " bytes, got ",
                     header.size()));
  }
  ByteReader r(header);
  const uint8_t kind = r.Get<uint8_t>();
  if (kind < static_cast<uint8_t>(Opcode::kRead) ||
      kind > static_cast<uint8_t>(Opcode::kSend)) {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown verb kind ", kind));
  }
  VerbRequest request;
  request.kind = static_cast<Opcode>(kind);
  request.region_id = r.Get<uint32_t>();
  request.offset = r.Get<uint64_t>();
  request.length = r.Get<uint32_t>();
  request.operand_a = r.Get<uint64_t>();
  request.operand_b = r.Get<uint64_t>();
  if (CarriesPayload(request.kind) && request.length > kMaxFramePayload) {
    return absl::InvalidArgumentError(
        absl::StrCat("payload of ", request.length, " bytes exceeds limit"));
  }
  return request;
}

absl::StatusOr<VerbRequest> DecodeVerbFrame(std::span<const uint8_t> frame) {
  absl::StatusOr<VerbRequest> request = ParseVerbHeader(frame);
  if (!request.ok()) return request.status();
  auto rest = frame.subspan(kVerbHeaderSize);
  if (CarriesPayload(request->kind)) {
    if (rest.size() != request->length) {
      return absl::InvalidArgumentError(
          absl::StrCat("frame declares ", request->length,
                       " payload bytes, carries ", rest.size()));
    }
    request->payload.assign(rest.begin(), rest.end());
  } else if (!rest.empty()) {
    return absl::InvalidArgumentError("trailing bytes after verb header");
  }
  return request;
}

std::vector<uint8_t> EncodeReplyFrame(const VerbReply& reply) {
  std::vector<uint8_t> out;
  out.reserve(kReplyHeaderSize + reply.payload.size());
  ByteWriter(out)
      .Put(static_cast<uint8_t>(reply.status))
      .Put(static_cast<uint32_t>(reply.payload.size()))
      .PutBytes(reply.payload);
  return out;
}

absl::StatusOr<std::pair<WcStatus, uint32_t>> ParseReplyHeader(
    std::span<const uint8_t> header) {
  if (header.size() < kReplyHeaderSize) {
    return absl::InvalidArgumentError("short reply header");
  }
  ByteReader r(header);
  const uint8_t status = r.Get<uint8_t>();
  if (status > static_cast<uint8_t>(WcStatus::kTransportError)) {
    return absl::InvalidArgumentError(absl::StrCat("unknown status ", status));
  }
  const uint32_t length = r.Get<uint32_t>();
  if (length > kMaxFramePayload) {
    return absl::InvalidArgumentError("reply payload exceeds limit");
  }
  return std::make_pair(static_cast<WcStatus>(status), length);
}

absl::StatusOr<VerbReply> DecodeReplyFrame(std::span<const uint8_t> frame) {
  auto header = ParseReplyHeader(frame);
  if (!header.ok()) return header.status();
  auto rest = frame.subspan(kReplyHeaderSize);
  if (rest.size() != header->second) {
    return absl::InvalidArgumentError("reply length mismatch");
  }
  return VerbReply{header->first, {rest.begin(), rest.end()}};
}

}  // namespace dlm::verbs
