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

#ifndef DLM_CHECKER_TRACE_H_
#define DLM_CHECKER_TRACE_H_

// Trace file format: one event per line,
//
//   timestamp_ns,client_id,item_id,op,mode,outcome
//
// op in {ACQ, REL}, mode in {SHARED, EXCLUSIVE}, outcome in
// {REQ, GRANT, ACK, TIMEOUT}.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dlm/common/types.h"

namespace dlm::checker {

enum class TraceOp : uint8_t { kAcquire, kRelease };
enum class Outcome : uint8_t { kRequest, kGrant, kAck, kTimeout };

struct TraceEvent {
  int64_t timestamp_ns = 0;
  uint32_t client_id = 0;
  uint32_t item_id = 0;
  TraceOp op = TraceOp::kAcquire;
  LockMode mode = LockMode::kExclusive;
  Outcome outcome = Outcome::kRequest;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

std::string FormatEvent(const TraceEvent& event);
absl::StatusOr<TraceEvent> ParseEvent(std::string_view line);

// Blank lines are skipped. Errors name the 1-based line number.
absl::StatusOr<std::vector<TraceEvent>> ReadTrace(std::istream& in);
absl::StatusOr<std::vector<TraceEvent>> ReadTraceFile(const std::string& path);
absl::Status WriteTrace(std::ostream& out, std::span<const TraceEvent> trace);
absl::Status WriteTraceFile(const std::string& path,
                            std::span<const TraceEvent> trace);

// Append-only, many-writer event sink. Sharded by client so concurrent
// clients rarely contend.
class TraceSink {
 public:
  void Record(const TraceEvent& event);
  // Stamps the event with MonotonicNanos().
  void Record(uint32_t client_id, uint32_t item_id, TraceOp op, LockMode mode,
              Outcome outcome);

  // All events, stably sorted by timestamp; per-client order is preserved.
  std::vector<TraceEvent> Snapshot() const;
  size_t size() const;

 private:
  static constexpr size_t kShards = 64;
  struct Shard {
    mutable std::mutex mu;
    std::vector<TraceEvent> events;
  };
  std::array<Shard, kShards> shards_;
};

}  // namespace dlm::checker

#endif  // DLM_CHECKER_TRACE_H_
