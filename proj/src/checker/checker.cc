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

#include "dlm/checker/checker.h"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"

namespace dlm::checker {
namespace {

using ClientItem = std::pair<uint32_t, uint32_t>;

// Indices of `trace` in timestamp order, ties kept in input order.
std::vector<size_t> TimeOrder(std::span<const TraceEvent> trace) {
  std::vector<size_t> order(trace.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return trace[a].timestamp_ns < trace[b].timestamp_ns;
  });
  return order;
}

struct Interval {
  TraceEvent grant;
  int64_t end = std::numeric_limits<int64_t>::max();
};

}  // namespace

const char* ViolationKindName(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kDoubleExclusive:
      return "DOUBLE_EXCLUSIVE";
    case ViolationKind::kSharedExclusiveOverlap:
      return "SHARED_EXCLUSIVE_OVERLAP";
    case ViolationKind::kFifoViolation:
      return "FIFO_VIOLATION";
    case ViolationKind::kConservation:
      return "CONSERVATION";
    case ViolationKind::kOrphanEvent:
      return "ORPHAN_EVENT";
  }
  return "UNKNOWN";
}

std::string FormatViolation(const Violation& v) {
  std::vector<std::string> events;
  for (const TraceEvent& e : v.events) events.push_back(FormatEvent(e));
  return absl::StrCat(ViolationKindName(v.kind), ": ", v.detail, " [",
                      absl::StrJoin(events, " | "), "]");
}

std::vector<Violation> CheckSafety(std::span<const TraceEvent> trace) {
  // Build hold intervals per (client, item) in each client's own order.
  std::vector<Interval> intervals;
  std::map<ClientItem, size_t> open;
  for (size_t i : TimeOrder(trace)) {
    const TraceEvent& e = trace[i];
    const ClientItem key{e.client_id, e.item_id};
    if (e.op == TraceOp::kAcquire && e.outcome == Outcome::kGrant) {
      if (open.contains(key)) continue;  // re-grant; CheckConservation reports
      open[key] = intervals.size();
      intervals.push_back({e});
    } else if (e.op == TraceOp::kRelease && e.outcome == Outcome::kRequest) {
      auto it = open.find(key);
      if (it == open.end()) continue;
      intervals[it->second].end = e.timestamp_ns;
      open.erase(it);
    }
  }

  // Sweep interval endpoints; ends sort before starts at equal times.
  struct Point {
    int64_t t;
    int kind;  // 0 = end, 1 = start
    size_t interval;
  };
  std::vector<Point> points;
  for (size_t k = 0; k < intervals.size(); ++k) {
    points.push_back({intervals[k].grant.timestamp_ns, 1, k});
    if (intervals[k].end != std::numeric_limits<int64_t>::max()) {
      points.push_back({intervals[k].end, 0, k});
    }
  }
  std::stable_sort(points.begin(), points.end(),
                   [](const Point& a, const Point& b) {
                     if (a.t != b.t) return a.t < b.t;
                     return a.kind < b.kind;
                   });

  std::vector<Violation> violations;
  std::map<uint32_t, std::vector<size_t>> active;  // item -> intervals
  for (const Point& p : points) {
    const Interval& iv = intervals[p.interval];
    std::vector<size_t>& holders = active[iv.grant.item_id];
    if (p.kind == 0) {
      std::erase(holders, p.interval);
      continue;
    }
    for (size_t other : holders) {
      const TraceEvent& held = intervals[other].grant;
      if (held.mode == LockMode::kShared && iv.grant.mode == LockMode::kShared) {
        continue;
      }
      const bool both_exclusive = held.mode == LockMode::kExclusive &&
                                  iv.grant.mode == LockMode::kExclusive;
      violations.push_back(Violation{
          both_exclusive ? ViolationKind::kDoubleExclusive
                         : ViolationKind::kSharedExclusiveOverlap,
          {held, iv.grant},
          absl::StrCat("item ", iv.grant.item_id, " granted to client ",
                       iv.grant.client_id, " while client ", held.client_id,
                       " holds it ", LockModeName(held.mode))});
    }
    // A zero-length hold is checked but never becomes a holder.
    if (iv.end != iv.grant.timestamp_ns) holders.push_back(p.interval);
  }
  return violations;
}

absl::StatusOr<std::vector<Violation>> CheckFifo(
    std::span<const TraceEvent> trace, Design design) {
  if (!IsServerDesign(design)) {
    return absl::FailedPreconditionError(absl::StrCat(
        "FIFO order is not a property of the ", DesignName(design), " design"));
  }
  std::vector<Violation> violations;
  std::map<uint32_t, std::deque<TraceEvent>> pending;  // item -> REQ events
  for (size_t i : TimeOrder(trace)) {
    const TraceEvent& e = trace[i];
    if (e.op != TraceOp::kAcquire) continue;
    std::deque<TraceEvent>& queue = pending[e.item_id];
    if (e.outcome == Outcome::kRequest) {
      queue.push_back(e);
      continue;
    }
    if (e.outcome != Outcome::kGrant && e.outcome != Outcome::kTimeout) continue;
    auto it = std::find_if(queue.begin(), queue.end(), [&](const TraceEvent& r) {
      return r.client_id == e.client_id;
    });
    if (it == queue.end()) continue;  // orphan; CheckConservation reports
    if (e.outcome == Outcome::kGrant && it != queue.begin()) {
      const bool shared_batch =
          e.mode == LockMode::kShared &&
          std::all_of(queue.begin(), it, [](const TraceEvent& r) {
            return r.mode == LockMode::kShared;
          });
      if (!shared_batch) {
        violations.push_back(Violation{
            ViolationKind::kFifoViolation,
            {queue.front(), *it, e},
            absl::StrCat("item ", e.item_id, " granted to client ",
                         e.client_id, " ahead of earlier request from client ",
                         queue.front().client_id)});
      }
    }
    queue.erase(it);
  }
  return violations;
}

std::vector<Violation> CheckConservation(std::span<const TraceEvent> trace) {
  enum class State {
    kIdle,
    kRequested,
    kHeld,
    kReleasing,
    kRollbackPending,
    kRollingBack,
  };
  struct Lifecycle {
    State state = State::kIdle;
    LockMode mode = LockMode::kExclusive;
    TraceEvent last;
  };

  std::vector<Violation> violations;
  std::map<ClientItem, Lifecycle> lifecycles;
  for (size_t i : TimeOrder(trace)) {
    const TraceEvent& e = trace[i];
    Lifecycle& lc = lifecycles[{e.client_id, e.item_id}];
    const bool same_mode = lc.state == State::kIdle || lc.mode == e.mode;
    State next = lc.state;
    bool legal = same_mode;
    if (e.op == TraceOp::kAcquire) {
      switch (e.outcome) {
        case Outcome::kRequest:
          legal = lc.state == State::kIdle;
          next = State::kRequested;
          break;
        case Outcome::kGrant:
          legal = legal && lc.state == State::kRequested;
          next = State::kHeld;
          break;
        case Outcome::kTimeout:
          legal = legal && lc.state == State::kRequested;
          next = e.mode == LockMode::kShared ? State::kRollbackPending
                                             : State::kIdle;
          break;
        case Outcome::kAck:
          legal = false;
          break;
      }
    } else {
      switch (e.outcome) {
        case Outcome::kRequest:
          legal = legal && (lc.state == State::kHeld ||
                            lc.state == State::kRollbackPending);
          next = lc.state == State::kHeld ? State::kReleasing
                                          : State::kRollingBack;
          break;
        case Outcome::kAck:
          legal = legal && (lc.state == State::kReleasing ||
                            lc.state == State::kRollingBack);
          next = State::kIdle;
          break;
        default:
          legal = false;
      }
    }
    if (!legal) {
      Violation v{ViolationKind::kOrphanEvent, {}, ""};
      if (lc.state != State::kIdle) v.events.push_back(lc.last);
      v.events.push_back(e);
      v.detail = absl::StrCat("client ", e.client_id, " item ", e.item_id,
                              ": event out of lifecycle order");
      violations.push_back(std::move(v));
      continue;
    }
    lc.state = next;
    lc.mode = e.mode;
    lc.last = e;
  }

  for (const auto& [key, lc] : lifecycles) {
    const char* what = "";
    switch (lc.state) {
      case State::kIdle:
        continue;
      case State::kRequested:
        what = "acquire never resolved";
        break;
      case State::kHeld:
        what = "grant never released";
        break;
      case State::kReleasing:
        what = "release never acknowledged";
        break;
      case State::kRollbackPending:
      case State::kRollingBack:
        what = "shared timeout not rolled back";
        break;
    }
    violations.push_back(Violation{
        ViolationKind::kConservation,
        {lc.last},
        absl::StrCat("client ", key.first, " item ", key.second, ": ", what)});
  }
  return violations;
}

std::vector<Violation> CheckAll(std::span<const TraceEvent> trace,
                                std::optional<Design> design) {
  std::vector<Violation> all = CheckSafety(trace);
  if (design.has_value() && IsServerDesign(*design)) {
    absl::StatusOr<std::vector<Violation>> fifo = CheckFifo(trace, *design);
    if (fifo.ok()) all.insert(all.end(), fifo->begin(), fifo->end());
  }
  std::vector<Violation> conservation = CheckConservation(trace);
  all.insert(all.end(), conservation.begin(), conservation.end());
  return all;
}

}  // namespace dlm::checker
