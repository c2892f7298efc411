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

#ifndef DLM_CHECKER_CHECKER_H_
#define DLM_CHECKER_CHECKER_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "dlm/checker/trace.h"
#include "dlm/common/types.h"

namespace dlm::checker {

enum class ViolationKind : uint8_t {
  kDoubleExclusive,
  kSharedExclusiveOverlap,
  kFifoViolation,
  kConservation,
  kOrphanEvent,
};

struct Violation {
  ViolationKind kind;
  // The offending event last; earlier entries are the events it conflicts
  // with or follows.
  std::vector<TraceEvent> events;
  std::string detail;
};

const char* ViolationKindName(ViolationKind kind);
std::string FormatViolation(const Violation& violation);

// Hold intervals are [GRANT, REL REQ] per client and item. Flags every pair
// of overlapping intervals on one item where either side is EXCLUSIVE. At
// equal timestamps a release is taken to precede a grant.
std::vector<Violation> CheckSafety(std::span<const TraceEvent> trace);

// Per item, grants must follow REQ order, except that a SHARED request may be
// granted ahead of earlier pending requests that are all SHARED (one batch).
// Only server-centric designs make a FIFO claim; client-centric traces get a
// FailedPrecondition.
absl::StatusOr<std::vector<Violation>> CheckFifo(
    std::span<const TraceEvent> trace, Design design);

// Replays every (client, item) lifecycle:
//   ACQ REQ -> ACQ GRANT -> REL REQ -> REL ACK
//   ACQ REQ -> ACQ TIMEOUT                       (exclusive)
//   ACQ REQ -> ACQ TIMEOUT -> REL REQ -> REL ACK (shared; the REL pair is the
//                                                 count rollback)
// Out-of-lifecycle events are ORPHAN_EVENT; lifecycles left open at the end of
// the trace are CONSERVATION.
std::vector<Violation> CheckConservation(std::span<const TraceEvent> trace);

// Safety and conservation, plus FIFO when `design` is a server design.
std::vector<Violation> CheckAll(std::span<const TraceEvent> trace,
                                std::optional<Design> design);

}  // namespace dlm::checker

#endif  // DLM_CHECKER_CHECKER_H_
