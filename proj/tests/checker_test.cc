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

#include <sstream>
#include <string>
#include <vector>

#include "dlm/checker/checker.h"
#include "dlm/checker/trace.h"
#include "gtest/gtest.h"

namespace dlm::checker {
namespace {

constexpr LockMode S = LockMode::kShared;
constexpr LockMode E = LockMode::kExclusive;

TraceEvent Ev(int64_t t, uint32_t client, TraceOp op, LockMode mode,
              Outcome outcome, uint32_t item = 0) {
  return TraceEvent{t, client, item, op, mode, outcome};
}

// Full acquire/release lifecycle with REQ at t, GRANT at t+g, REL at t+r.
void Hold(std::vector<TraceEvent>& trace, uint32_t client, LockMode mode,
          int64_t req, int64_t grant, int64_t rel, uint32_t item = 0) {
  trace.push_back(Ev(req, client, TraceOp::kAcquire, mode, Outcome::kRequest, item));
  trace.push_back(Ev(grant, client, TraceOp::kAcquire, mode, Outcome::kGrant, item));
  trace.push_back(Ev(rel, client, TraceOp::kRelease, mode, Outcome::kRequest, item));
  trace.push_back(Ev(rel + 1, client, TraceOp::kRelease, mode, Outcome::kAck, item));
}

std::vector<ViolationKind> Kinds(const std::vector<Violation>& v) {
  std::vector<ViolationKind> kinds;
  for (const Violation& x : v) kinds.push_back(x.kind);
  return kinds;
}

TEST(SafetyTest, SequentialExclusivesAreSafe) {
  std::vector<TraceEvent> t;
  Hold(t, 1, E, 0, 1, 10);
  Hold(t, 2, E, 2, 12, 20);
  EXPECT_TRUE(CheckSafety(t).empty());
}

TEST(SafetyTest, TwoExclusiveHoldersAreFlagged) {
  std::vector<TraceEvent> t;
  Hold(t, 1, E, 0, 1, 10);
  Hold(t, 2, E, 0, 5, 20);
  std::vector<Violation> v = CheckSafety(t);
  ASSERT_EQ(Kinds(v), std::vector{ViolationKind::kDoubleExclusive});
  ASSERT_EQ(v[0].events.size(), 2u);
  EXPECT_EQ(v[0].events[0].client_id, 1u);
  EXPECT_EQ(v[0].events[1].client_id, 2u);
}

TEST(SafetyTest, SharedThenExclusiveOverlapIsFlagged) {
  std::vector<TraceEvent> t;
  Hold(t, 1, S, 0, 1, 10);
  Hold(t, 2, E, 0, 5, 20);
  EXPECT_EQ(Kinds(CheckSafety(t)),
            std::vector{ViolationKind::kSharedExclusiveOverlap});
}

TEST(SafetyTest, SharedHoldersMayOverlap) {
  std::vector<TraceEvent> t;
  Hold(t, 1, S, 0, 1, 10);
  Hold(t, 2, S, 0, 5, 20);
  Hold(t, 3, E, 0, 20, 30);  // starts exactly when the last one ends
  EXPECT_TRUE(CheckSafety(t).empty());
}

TEST(SafetyTest, DifferentItemsNeverConflict) {
  std::vector<TraceEvent> t;
  Hold(t, 1, E, 0, 1, 10, 0);
  Hold(t, 2, E, 0, 1, 10, 1);
  EXPECT_TRUE(CheckSafety(t).empty());
}

TEST(SafetyTest, UnreleasedGrantStaysHeld) {
  std::vector<TraceEvent> t;
  t.push_back(Ev(0, 1, TraceOp::kAcquire, E, Outcome::kRequest));
  t.push_back(Ev(1, 1, TraceOp::kAcquire, E, Outcome::kGrant));
  Hold(t, 2, S, 2, 100, 110);
  EXPECT_EQ(Kinds(CheckSafety(t)),
            std::vector{ViolationKind::kSharedExclusiveOverlap});
}

TEST(SafetyTest, ZeroLengthHoldInsideAnotherIsFlagged) {
  std::vector<TraceEvent> t;
  Hold(t, 1, E, 0, 1, 10);
  Hold(t, 2, E, 0, 5, 5);
  EXPECT_EQ(Kinds(CheckSafety(t)), std::vector{ViolationKind::kDoubleExclusive});
}

TEST(FifoTest, InOrderGrantsAreClean) {
  std::vector<TraceEvent> t;
  Hold(t, 1, E, 0, 2, 10);
  Hold(t, 2, E, 1, 11, 20);
  auto v = CheckFifo(t, Design::kServerTcp);
  ASSERT_TRUE(v.ok());
  EXPECT_TRUE(v->empty());
}

TEST(FifoTest, OvertakingIsFlagged) {
  std::vector<TraceEvent> t;
  Hold(t, 1, E, 0, 11, 20);
  Hold(t, 2, E, 1, 2, 10);
  auto v = CheckFifo(t, Design::kServerSendRecv);
  ASSERT_TRUE(v.ok());
  EXPECT_EQ(Kinds(*v), std::vector{ViolationKind::kFifoViolation});
}

TEST(FifoTest, SharedBatchIsClean) {
  std::vector<TraceEvent> t;
  Hold(t, 1, S, 0, 3, 10);
  Hold(t, 2, S, 1, 3, 10);
  Hold(t, 3, E, 2, 12, 20);
  auto v = CheckFifo(t, Design::kServerTcp);
  ASSERT_TRUE(v.ok());
  EXPECT_TRUE(v->empty());
}

TEST(FifoTest, SharedMayNotOvertakeExclusive) {
  std::vector<TraceEvent> t;
  Hold(t, 9, S, 0, 1, 30);   // current holder
  Hold(t, 1, E, 2, 31, 40);  // waits for 9
  Hold(t, 2, S, 3, 4, 10);   // overtakes the exclusive waiter
  auto v = CheckFifo(t, Design::kServerTcp);
  ASSERT_TRUE(v.ok());
  EXPECT_EQ(Kinds(*v), std::vector{ViolationKind::kFifoViolation});
}

TEST(FifoTest, NotApplicableToClientCentric) {
  EXPECT_TRUE(absl::IsFailedPrecondition(
      CheckFifo({}, Design::kClientCentric).status()));
}

TEST(ConservationTest, BalancedTraceIsClean) {
  std::vector<TraceEvent> t;
  Hold(t, 1, E, 0, 1, 10);
  Hold(t, 1, S, 12, 13, 20);
  EXPECT_TRUE(CheckConservation(t).empty());
}

TEST(ConservationTest, UnreleasedGrantIsFlagged) {
  std::vector<TraceEvent> t;
  t.push_back(Ev(0, 1, TraceOp::kAcquire, E, Outcome::kRequest));
  t.push_back(Ev(1, 1, TraceOp::kAcquire, E, Outcome::kGrant));
  std::vector<Violation> v = CheckConservation(t);
  ASSERT_EQ(Kinds(v), std::vector{ViolationKind::kConservation});
  EXPECT_EQ(v[0].events[0].outcome, Outcome::kGrant);
}

TEST(ConservationTest, SharedTimeoutWithRollbackIsClean) {
  std::vector<TraceEvent> t;
  t.push_back(Ev(0, 1, TraceOp::kAcquire, S, Outcome::kRequest));
  t.push_back(Ev(5, 1, TraceOp::kAcquire, S, Outcome::kTimeout));
  t.push_back(Ev(6, 1, TraceOp::kRelease, S, Outcome::kRequest));
  t.push_back(Ev(7, 1, TraceOp::kRelease, S, Outcome::kAck));
  EXPECT_TRUE(CheckConservation(t).empty());
  EXPECT_TRUE(CheckSafety(t).empty());
}

TEST(ConservationTest, SharedTimeoutWithoutRollbackIsFlagged) {
  std::vector<TraceEvent> t;
  t.push_back(Ev(0, 1, TraceOp::kAcquire, S, Outcome::kRequest));
  t.push_back(Ev(5, 1, TraceOp::kAcquire, S, Outcome::kTimeout));
  EXPECT_EQ(Kinds(CheckConservation(t)),
            std::vector{ViolationKind::kConservation});
}

TEST(ConservationTest, ExclusiveTimeoutNeedsNoRollback) {
  std::vector<TraceEvent> t;
  t.push_back(Ev(0, 1, TraceOp::kAcquire, E, Outcome::kRequest));
  t.push_back(Ev(5, 1, TraceOp::kAcquire, E, Outcome::kTimeout));
  EXPECT_TRUE(CheckConservation(t).empty());
}

TEST(ConservationTest, OrphanEventsAreFlagged) {
  std::vector<TraceEvent> t;
  t.push_back(Ev(0, 1, TraceOp::kAcquire, E, Outcome::kGrant));
  t.push_back(Ev(3, 2, TraceOp::kRelease, S, Outcome::kAck));
  EXPECT_EQ(Kinds(CheckConservation(t)),
            (std::vector{ViolationKind::kOrphanEvent,
                         ViolationKind::kOrphanEvent}));
}

TEST(CheckAllTest, DeterministicAndDesignAware) {
  std::vector<TraceEvent> t;
  Hold(t, 1, E, 0, 11, 20);
  Hold(t, 2, E, 1, 2, 10);
  EXPECT_TRUE(CheckAll(t, Design::kClientCentric).empty());
  EXPECT_TRUE(CheckAll(t, std::nullopt).empty());
  std::vector<Violation> first = CheckAll(t, Design::kServerTcp);
  std::vector<Violation> second = CheckAll(t, Design::kServerTcp);
  ASSERT_EQ(first.size(), 1u);
  ASSERT_EQ(second.size(), 1u);
  EXPECT_EQ(FormatViolation(first[0]), FormatViolation(second[0]));
}

TEST(TraceFormatTest, RoundTrip) {
  std::vector<TraceEvent> t;
  Hold(t, 3, S, 100, 200, 300, 7);
  t.push_back(Ev(400, 4, TraceOp::kAcquire, E, Outcome::kTimeout, 1));
  EXPECT_EQ(FormatEvent(t[1]), "200,3,7,ACQ,SHARED,GRANT");
  std::stringstream buffer;
  ASSERT_TRUE(WriteTrace(buffer, t).ok());
  absl::StatusOr<std::vector<TraceEvent>> back = ReadTrace(buffer);
  ASSERT_TRUE(back.ok());
  EXPECT_EQ(*back, t);
}

TEST(TraceFormatTest, ParseErrorsCarryLineNumbers) {
  std::stringstream in("1,1,0,ACQ,EXCLUSIVE,REQ\n\n2,1,0,ACQ,EXCLUSIVE,GRAB\n");
  absl::StatusOr<std::vector<TraceEvent>> parsed = ReadTrace(in);
  ASSERT_FALSE(parsed.ok());
  EXPECT_NE(std::string(parsed.status().message()).find("line 3"),
            std::string::npos);
  EXPECT_FALSE(ParseEvent("1,2,3").ok());
  EXPECT_FALSE(ParseEvent("x,1,0,ACQ,SHARED,REQ").ok());
  EXPECT_FALSE(ParseEvent("1,1,0,GET,SHARED,REQ").ok());
}

TEST(TraceSinkTest, SnapshotIsTimeOrderedAndKeepsPerClientOrder) {
  TraceSink sink;
  sink.Record(Ev(5, 1, TraceOp::kAcquire, E, Outcome::kRequest));
  sink.Record(Ev(5, 1, TraceOp::kAcquire, E, Outcome::kGrant));
  sink.Record(Ev(3, 2, TraceOp::kAcquire, S, Outcome::kRequest));
  std::vector<TraceEvent> t = sink.Snapshot();
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t[0].client_id, 2u);
  EXPECT_EQ(t[1].outcome, Outcome::kRequest);
  EXPECT_EQ(t[2].outcome, Outcome::kGrant);
}

}  // namespace
}  // namespace dlm::checker
