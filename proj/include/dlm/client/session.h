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

#ifndef DLM_CLIENT_SESSION_H_
#define DLM_CLIENT_SESSION_H_

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dlm/checker/trace.h"
#include "dlm/common/types.h"
#include "dlm/locktable/lock_table.h"
#include "dlm/verbs/queue_pair.h"

namespace dlm::client {

struct HeldLock {
  uint32_t item = 0;
  LockMode mode = LockMode::kExclusive;

  friend bool operator==(const HeldLock&, const HeldLock&) = default;
};

struct SessionOptions {
  // Wait between a failed attempt and the next one, on both the exclusive CAS
  // path and the shared READ-poll path. Zero yields the CPU and retries.
  std::chrono::nanoseconds backoff{0};
  // Retries after the first attempt; nullopt retries forever.
  std::optional<uint64_t> max_retries;
  // Replaces the default backoff wait when set.
  std::function<void()> backoff_hook;
};

struct SessionStats {
  uint64_t cas_failures = 0;
  uint64_t shared_polls = 0;
  uint64_t timeouts = 0;
  uint64_t rollbacks = 0;
};

// One client of the client-centric design. Every acquire and release is a
// sequence of one-sided verbs on the host's lock table; the host application
// takes no part. Single actor: one verb in flight at a time.
//
// Errors: DeadlineExceeded when retries run out (the lock word is left as it
// was found), FailedPrecondition for protocol misuse (double acquire, release
// of a lock not held), Unavailable when a verb itself fails.
class ClientSession {
 public:
  // `client_id` must be in [1, kMaxClients]. `sink` may be null.
  static absl::StatusOr<ClientSession> Create(
      std::shared_ptr<verbs::QueuePair> qp, uint32_t client_id,
      locktable::LockTable table, SessionOptions options = {},
      checker::TraceSink* sink = nullptr);

  // CAS(expected = (0|0), swap = (client_id|0)) until the returned old value
  // is (0|0).
  absl::StatusOr<HeldLock> AcquireExclusive(uint32_t item);
  // One FA(+1); if the old owner half is nonzero, poll 4-byte READs of the
  // owner half until it reads zero. Never issues a second FA. On timeout the
  // increment is undone with FA(-1).
  absl::StatusOr<HeldLock> AcquireShared(uint32_t item);
  absl::StatusOr<HeldLock> Acquire(uint32_t item, LockMode mode);

  // 4-byte WRITE of zero to the owner half.
  absl::Status ReleaseExclusive(const HeldLock& lock);
  // FA(2^64 - 1): decrements the shared half.
  absl::Status ReleaseShared(const HeldLock& lock);
  absl::Status Release(const HeldLock& lock);

  uint32_t client_id() const { return client_id_; }
  const locktable::LockTable& table() const { return table_; }
  const SessionStats& stats() const { return stats_; }
  bool holds(uint32_t item) const { return held_.contains(item); }
  verbs::QueuePair& qp() { return *qp_; }

 private:
  ClientSession(std::shared_ptr<verbs::QueuePair> qp, uint32_t client_id,
                locktable::LockTable table, SessionOptions options,
                checker::TraceSink* sink);

  void Backoff();
  bool RetriesLeft(uint64_t retries_done) const;
  void Trace(uint32_t item, checker::TraceOp op, LockMode mode,
             checker::Outcome outcome);
  absl::Status CheckFree(uint32_t item) const;

  std::shared_ptr<verbs::QueuePair> qp_;
  uint32_t client_id_;
  locktable::LockTable table_;
  SessionOptions options_;
  checker::TraceSink* sink_;
  std::map<uint32_t, LockMode> held_;
  SessionStats stats_;
};

}  // namespace dlm::client

#endif  // DLM_CLIENT_SESSION_H_
