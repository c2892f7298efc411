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

#include "dlm/client/session.h"

#include <array>
#include <thread>
#include <utility>

#include "absl/strings/str_cat.h"
#include "dlm/common/clock.h"
#include "dlm/common/endian.h"

namespace dlm::client {

using checker::Outcome;
using checker::TraceOp;
using locktable::Decode;
using locktable::Encode;

namespace {

absl::Status VerbFailure(const verbs::Completion& c) {
  return absl::UnavailableError(absl::StrCat(
      verbs::OpcodeName(c.opcode), " failed: ", verbs::WcStatusName(c.status)));
}

}  // namespace

absl::StatusOr<ClientSession> ClientSession::Create(
    std::shared_ptr<verbs::QueuePair> qp, uint32_t client_id,
    locktable::LockTable table, SessionOptions options,
    checker::TraceSink* sink) {
  if (client_id == 0 || client_id > locktable::kMaxClients) {
    return absl::InvalidArgumentError(absl::StrCat(
        "client id ", client_id, " outside [1, ", locktable::kMaxClients, "]"));
  }
  if (qp == nullptr) return absl::InvalidArgumentError("null queue pair");
  return ClientSession(std::move(qp), client_id, std::move(table),
                       std::move(options), sink);
}

ClientSession::ClientSession(std::shared_ptr<verbs::QueuePair> qp,
                             uint32_t client_id, locktable::LockTable table,
                             SessionOptions options, checker::TraceSink* sink)
    : qp_(std::move(qp)),
      client_id_(client_id),
      table_(std::move(table)),
      options_(std::move(options)),
      sink_(sink) {}

void ClientSession::Backoff() {
  if (options_.backoff_hook) {
    options_.backoff_hook();
  } else if (options_.backoff > std::chrono::nanoseconds::zero()) {
    Delay(options_.backoff);
  } else {
    std::this_thread::yield();
  }
}

bool ClientSession::RetriesLeft(uint64_t retries_done) const {
  return !options_.max_retries.has_value() ||
         retries_done < *options_.max_retries;
}

void ClientSession::Trace(uint32_t item, TraceOp op, LockMode mode,
                          Outcome outcome) {
  if (sink_ != nullptr) sink_->Record(client_id_, item, op, mode, outcome);
}

absl::Status ClientSession::CheckFree(uint32_t item) const {
  if (held_.contains(item)) {
    return absl::FailedPreconditionError(absl::StrCat(
        "client ", client_id_, " already holds item ", item));
  }
  return absl::OkStatus();
}

absl::StatusOr<HeldLock> ClientSession::AcquireExclusive(uint32_t item) {
  if (absl::Status s = CheckFree(item); !s.ok()) return s;
  absl::StatusOr<verbs::RemoteAddress> word = table_.WordAddress(item);
  if (!word.ok()) return word.status();

  Trace(item, TraceOp::kAcquire, LockMode::kExclusive, Outcome::kRequest);
  const uint64_t unlocked = Encode(0, 0);
  const uint64_t mine = Encode(client_id_, 0);
  for (uint64_t retries = 0;; ++retries) {
    verbs::Completion c = qp_->CompareSwap(*word, unlocked, mine);
    if (!c.ok()) return VerbFailure(c);
    if (c.old_value() == unlocked) break;
    ++stats_.cas_failures;
    if (!RetriesLeft(retries)) {
      ++stats_.timeouts;
      Trace(item, TraceOp::kAcquire, LockMode::kExclusive, Outcome::kTimeout);
      return absl::DeadlineExceededError(absl::StrCat(
          "exclusive lock on item ", item, " not acquired after ",
          retries + 1, " attempts"));
    }
    Backoff();
  }
  held_[item] = LockMode::kExclusive;
  Trace(item, TraceOp::kAcquire, LockMode::kExclusive, Outcome::kGrant);
  return HeldLock{item, LockMode::kExclusive};
}

absl::StatusOr<HeldLock> ClientSession::AcquireShared(uint32_t item) {
  if (absl::Status s = CheckFree(item); !s.ok()) return s;
  absl::StatusOr<verbs::RemoteAddress> word = table_.WordAddress(item);
  if (!word.ok()) return word.status();
  absl::StatusOr<verbs::RemoteAddress> owner_half =
      table_.ExclusiveHalfAddress(item);
  if (!owner_half.ok()) return owner_half.status();

  Trace(item, TraceOp::kAcquire, LockMode::kShared, Outcome::kRequest);
  verbs::Completion c = qp_->FetchAdd(*word, 1);
  if (!c.ok()) return VerbFailure(c);
  uint32_t owner = Decode(c.old_value()).exclusive_owner;
  for (uint64_t retries = 0; owner != 0; ++retries) {
    if (!RetriesLeft(retries)) {
      ++stats_.timeouts;
      Trace(item, TraceOp::kAcquire, LockMode::kShared, Outcome::kTimeout);
      Trace(item, TraceOp::kRelease, LockMode::kShared, Outcome::kRequest);
      verbs::Completion undo = qp_->FetchAdd(*word, locktable::kDecrement);
      if (!undo.ok()) return VerbFailure(undo);
      ++stats_.rollbacks;
      Trace(item, TraceOp::kRelease, LockMode::kShared, Outcome::kAck);
      return absl::DeadlineExceededError(absl::StrCat(
          "shared lock on item ", item, " still exclusively owned by client ",
          owner, " after ", retries, " polls"));
    }
    Backoff();
    verbs::Completion poll = qp_->Read(*owner_half, 4);
    if (!poll.ok()) return VerbFailure(poll);
    ++stats_.shared_polls;
    owner = LoadLittleEndian<uint32_t>(poll.payload.data());
  }
  held_[item] = LockMode::kShared;
  Trace(item, TraceOp::kAcquire, LockMode::kShared, Outcome::kGrant);
  return HeldLock{item, LockMode::kShared};
}

absl::StatusOr<HeldLock> ClientSession::Acquire(uint32_t item, LockMode mode) {
  return mode == LockMode::kExclusive ? AcquireExclusive(item)
                                      : AcquireShared(item);
}

absl::Status ClientSession::ReleaseExclusive(const HeldLock& lock) {
  auto it = held_.find(lock.item);
  if (lock.mode != LockMode::kExclusive || it == held_.end() ||
      it->second != LockMode::kExclusive) {
    return absl::FailedPreconditionError(absl::StrCat(
        "client ", client_id_, " does not own item ", lock.item,
        " exclusively"));
  }
  absl::StatusOr<verbs::RemoteAddress> owner_half =
      table_.ExclusiveHalfAddress(lock.item);
  if (!owner_half.ok()) return owner_half.status();
  Trace(lock.item, TraceOp::kRelease, LockMode::kExclusive, Outcome::kRequest);
  static constexpr std::array<uint8_t, 4> kZero = {0, 0, 0, 0};
  verbs::Completion c = qp_->Write(*owner_half, kZero);
  if (!c.ok()) return VerbFailure(c);
  held_.erase(it);
  Trace(lock.item, TraceOp::kRelease, LockMode::kExclusive, Outcome::kAck);
  return absl::OkStatus();
}

absl::Status ClientSession::ReleaseShared(const HeldLock& lock) {
  auto it = held_.find(lock.item);
  if (lock.mode != LockMode::kShared || it == held_.end() ||
      it->second != LockMode::kShared) {
    return absl::FailedPreconditionError(absl::StrCat(
        "client ", client_id_, " does not hold item ", lock.item, " shared"));
  }
  absl::StatusOr<verbs::RemoteAddress> word = table_.WordAddress(lock.item);
  if (!word.ok()) return word.status();
  Trace(lock.item, TraceOp::kRelease, LockMode::kShared, Outcome::kRequest);
  verbs::Completion c = qp_->FetchAdd(*word, locktable::kDecrement);
  if (!c.ok()) return VerbFailure(c);
  held_.erase(it);
  Trace(lock.item, TraceOp::kRelease, LockMode::kShared, Outcome::kAck);
  return absl::OkStatus();
}

absl::Status ClientSession::Release(const HeldLock& lock) {
  return lock.mode == LockMode::kExclusive ? ReleaseExclusive(lock)
                                           : ReleaseShared(lock);
}

}  // namespace dlm::client
