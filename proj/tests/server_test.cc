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

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <future>
#include <map>
#include <random>
#include <set>
#include <thread>
#include <vector>

#include "dlm/checker/checker.h"
#include "dlm/checker/trace.h"
#include "dlm/server/item_queue.h"
#include "dlm/server/lock_manager.h"
#include "dlm/server/message.h"
#include "dlm/server/sr_frontend.h"
#include "dlm/server/tcp_frontend.h"
#include "dlm/server/upper_bound.h"
#include "dlm/verbs/inproc.h"
#include "dlm/verbs/tcp.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace dlm::server {
namespace {

using ::testing::ElementsAre;

constexpr LockMode S = LockMode::kShared;
constexpr LockMode E = LockMode::kExclusive;

QueuedRequest Q(uint32_t client, LockMode mode) {
  return QueuedRequest{client, mode, 0};
}

ItemQueue MakeQueue(std::vector<QueuedRequest> granted,
                    std::vector<QueuedRequest> pending) {
  ItemQueue q;
  for (const QueuedRequest& g : granted) q.granted[g.client_id] = g;
  q.pending.assign(pending.begin(), pending.end());
  return q;
}

TEST(GrantScanTest, ExclusiveHeadOnIdleItem) {
  ItemQueue q = MakeQueue({}, {Q(1, E), Q(2, S)});
  EXPECT_THAT(GrantScan(q), ElementsAre(Q(1, E)));
  EXPECT_THAT(q.pending, ElementsAre(Q(2, S)));
}

TEST(GrantScanTest, SharedPrefixOnly) {
  ItemQueue q = MakeQueue({}, {Q(1, S), Q(2, S), Q(3, E), Q(4, S)});
  EXPECT_THAT(GrantScan(q), ElementsAre(Q(1, S), Q(2, S)));
  EXPECT_THAT(q.pending, ElementsAre(Q(3, E), Q(4, S)));
  EXPECT_EQ(q.granted.size(), 2u);
}

TEST(GrantScanTest, ExclusiveHeadWaitsForSharedHolders) {
  ItemQueue q = MakeQueue({Q(9, S)}, {Q(3, E), Q(4, S)});
  EXPECT_TRUE(GrantScan(q).empty());
  EXPECT_EQ(q.pending.size(), 2u);
}

TEST(GrantScanTest, SharedHeadWaitsForExclusiveHolder) {
  ItemQueue q = MakeQueue({Q(1, E)}, {Q(2, S)});
  EXPECT_TRUE(GrantScan(q).empty());
}

LockRequest Acq(uint32_t client, uint32_t item, LockMode mode,
                uint64_t id = 1) {
  return LockRequest{id, client, item, mode, LockRequest::Op::kAcquire};
}

LockRequest Rel(uint32_t client, uint32_t item, uint64_t id = 2) {
  return LockRequest{id, client, item, E, LockRequest::Op::kRelease};
}

Reply Grant(uint32_t client, uint32_t item, uint64_t id = 1) {
  return Reply{client, Message{MessageOp::kGrant, client, item, id}};
}

Reply Ack(uint32_t client, uint32_t item, uint64_t id = 2) {
  return Reply{client, Message{MessageOp::kAck, client, item, id}};
}

Reply Error(uint32_t client, uint32_t item, uint64_t id) {
  return Reply{client, Message{MessageOp::kError, client, item, id}};
}

TEST(LockManagerTest, ExclusiveOnEmptyQueueIsGrantedImmediately) {
  LockManager m(4);
  EXPECT_THAT(m.HandleAcquire(Acq(1, 0, E)), ElementsAre(Grant(1, 0)));
  EXPECT_TRUE(m.Snapshot(0).Holds(1));
}

TEST(LockManagerTest, SharedBehindExclusiveHolderIsQueued) {
  LockManager m(4);
  m.HandleAcquire(Acq(1, 0, E));
  EXPECT_TRUE(m.HandleAcquire(Acq(2, 0, S)).empty());
  EXPECT_TRUE(m.Snapshot(0).IsWaiting(2));
}

TEST(LockManagerTest, SharedJoinsSharedHolders) {
  LockManager m(4);
  m.HandleAcquire(Acq(1, 0, S));
  EXPECT_THAT(m.HandleAcquire(Acq(2, 0, S)), ElementsAre(Grant(2, 0)));
}

TEST(LockManagerTest, ReleaseGrantsConsecutiveSharedWaiters) {
  LockManager m(4);
  m.HandleAcquire(Acq(1, 0, E));
  m.HandleAcquire(Acq(2, 0, S, 5));
  m.HandleAcquire(Acq(3, 0, S, 6));
  m.HandleAcquire(Acq(4, 0, E, 7));
  EXPECT_THAT(m.HandleRelease(Rel(1, 0)),
              ElementsAre(Ack(1, 0), Grant(2, 0, 5), Grant(3, 0, 6)));
  ItemQueue q = m.Snapshot(0);
  EXPECT_THAT(q.pending, ElementsAre(QueuedRequest{4, E, 7}));
}

TEST(LockManagerTest, ExclusiveWaitsForLastSharedRelease) {
  LockManager m(4);
  m.HandleAcquire(Acq(2, 0, S));
  m.HandleAcquire(Acq(3, 0, S));
  m.HandleAcquire(Acq(4, 0, E, 9));
  EXPECT_THAT(m.HandleRelease(Rel(2, 0)), ElementsAre(Ack(2, 0)));
  EXPECT_THAT(m.HandleRelease(Rel(3, 0)),
              ElementsAre(Ack(3, 0), Grant(4, 0, 9)));
}

TEST(LockManagerTest, NewSharedQueuesBehindWaitingExclusive) {
  LockManager m(4);
  m.HandleAcquire(Acq(1, 0, S));
  m.HandleAcquire(Acq(2, 0, E));
  EXPECT_TRUE(m.HandleAcquire(Acq(3, 0, S)).empty());
}

TEST(LockManagerTest, ProtocolErrors) {
  LockManager m(4);
  EXPECT_THAT(m.HandleRelease(Rel(1, 0, 3)), ElementsAre(Error(1, 0, 3)));
  EXPECT_THAT(m.HandleAcquire(Acq(1, 4, E, 4)), ElementsAre(Error(1, 4, 4)));
  m.HandleAcquire(Acq(1, 0, E));
  EXPECT_THAT(m.HandleAcquire(Acq(1, 0, S, 8)), ElementsAre(Error(1, 0, 8)));
  m.HandleAcquire(Acq(2, 0, E));
  EXPECT_THAT(m.HandleAcquire(Acq(2, 0, E, 9)), ElementsAre(Error(2, 0, 9)));
  EXPECT_THAT(m.HandleRelease(Rel(2, 0, 10)), ElementsAre(Error(2, 0, 10)));
}

TEST(LockManagerTest, HandleDecodesWireOps) {
  LockManager m(2);
  EXPECT_THAT(m.Handle(Message{MessageOp::kAcquireShared, 1, 1, 3}),
              ElementsAre(Grant(1, 1, 3)));
  EXPECT_EQ(m.Snapshot(1).granted.at(1).mode, S);
  EXPECT_THAT(m.Handle(Message{MessageOp::kRelease, 1, 1, 4}),
              ElementsAre(Ack(1, 1, 4)));
  EXPECT_THAT(m.Handle(Message{MessageOp::kGrant, 1, 1, 5}),
              ElementsAre(Error(1, 1, 5)));
}

// Reference model: live requests per item in arrival order. Request i is
// held iff every earlier live request is held and, for shared requests, all
// of them are shared; an exclusive request is held only at position 0.
class ReferenceModel {
 public:
  struct Live {
    uint32_t client;
    LockMode mode;
  };

  void Acquire(uint32_t item, uint32_t client, LockMode mode) {
    live_[item].push_back({client, mode});
  }
  void Release(uint32_t item, uint32_t client) {
    auto& v = live_[item];
    v.erase(std::find_if(v.begin(), v.end(),
                         [&](const Live& l) { return l.client == client; }));
  }
  std::set<uint32_t> Held(uint32_t item) const {
    std::set<uint32_t> held;
    auto it = live_.find(item);
    if (it == live_.end()) return held;
    const auto& v = it->second;
    for (size_t i = 0; i < v.size(); ++i) {
      bool ok = v[i].mode == E ? i == 0 : true;
      for (size_t j = 0; j < i && ok; ++j) {
        ok = v[j].mode == S && held.contains(v[j].client);
      }
      if (!ok) break;
      held.insert(v[i].client);
    }
    return held;
  }
  bool IsLive(uint32_t item, uint32_t client) const {
    auto it = live_.find(item);
    if (it == live_.end()) return false;
    return std::any_of(it->second.begin(), it->second.end(),
                       [&](const auto& l) { return l.client == client; });
  }

 private:
  std::map<uint32_t, std::vector<Live>> live_;
};

TEST(LockManagerTest, RandomHistoriesMatchReferenceModel) {
  std::mt19937_64 rng(21);
  for (int round = 0; round < 200; ++round) {
    LockManager m(3);
    ReferenceModel ref;
    std::map<uint32_t, std::set<uint32_t>> held;  // item -> clients
    uint64_t grants = 0;
    uint64_t releases = 0;
    for (int step = 0; step < 200; ++step) {
      const uint32_t item = rng() % 3;
      const uint32_t client = 1 + rng() % 6;
      std::vector<Reply> replies;
      if (held[item].contains(client)) {
        replies = m.HandleRelease(Rel(client, item));
        ref.Release(item, client);
        held[item].erase(client);
        ASSERT_FALSE(replies.empty());
        EXPECT_EQ(replies[0], Ack(client, item));
        replies.erase(replies.begin());
        ++releases;
      } else if (!ref.IsLive(item, client)) {
        const LockMode mode = rng() % 2 ? S : E;
        replies = m.HandleAcquire(Acq(client, item, mode));
        ref.Acquire(item, client, mode);
      } else {
        continue;  // waiting clients are blocked
      }
      for (const Reply& r : replies) {
        ASSERT_EQ(r.message.op, MessageOp::kGrant);
        held[item].insert(r.to_client);
        ++grants;
      }
      for (uint32_t i = 0; i < 3; ++i) {
        ASSERT_EQ(held[i], ref.Held(i)) << "round " << round << " step "
                                        << step;
        std::set<uint32_t> snapshot;
        for (const auto& [c, _] : m.Snapshot(i).granted) snapshot.insert(c);
        ASSERT_EQ(snapshot, held[i]);
      }
    }
    size_t holders = 0;
    for (const auto& [_, s] : held) holders += s.size();
    EXPECT_EQ(m.grants_issued() - m.releases_processed(), holders);
    EXPECT_EQ(m.grants_issued(), grants);
    EXPECT_EQ(m.releases_processed(), releases);
  }
}

TEST(LockManagerTest, RecordsOrderedTrace) {
  checker::TraceSink sink;
  LockManager m(1, &sink);
  m.HandleAcquire(Acq(1, 0, E));
  m.HandleAcquire(Acq(2, 0, S));
  m.HandleRelease(Rel(1, 0));
  m.HandleRelease(Rel(2, 0));
  std::vector<checker::TraceEvent> trace = sink.Snapshot();
  ASSERT_EQ(trace.size(), 8u);
  for (size_t i = 1; i < trace.size(); ++i) {
    EXPECT_LT(trace[i - 1].timestamp_ns, trace[i].timestamp_ns);
  }
  using checker::Outcome;
  using checker::TraceOp;
  EXPECT_EQ(trace[3].client_id, 1u);
  EXPECT_EQ(trace[3].op, TraceOp::kRelease);
  EXPECT_EQ(trace[3].mode, E);
  EXPECT_EQ(trace[5].client_id, 2u);
  EXPECT_EQ(trace[5].outcome, Outcome::kGrant);
  EXPECT_TRUE(checker::CheckAll(trace, Design::kServerTcp).empty());
}

TEST(MessageTest, LayoutIsLittleEndian) {
  const auto bytes =
      EncodeMessage(Message{MessageOp::kAcquireExclusive, 0x01020304,
                            0x0A0B0C0D, 0x1122334455667788ull});
  const std::array<uint8_t, kMessageSize> want = {
      2,    0x04, 0x03, 0x02, 0x01, 0x0D, 0x0C, 0x0B, 0x0A,
      0x88, 0x77, 0x66, 0x55, 0x44, 0x33, 0x22, 0x11};
  EXPECT_EQ(bytes, want);
  absl::StatusOr<Message> back = DecodeMessage(bytes);
  ASSERT_TRUE(back.ok());
  EXPECT_EQ(back->request_id, 0x1122334455667788ull);
}

TEST(MessageTest, RejectsBadInput) {
  std::array<uint8_t, kMessageSize> bytes{};
  bytes[0] = 7;
  EXPECT_FALSE(DecodeMessage(bytes).ok());
  bytes[0] = 1;
  EXPECT_FALSE(DecodeMessage(std::span(bytes).first(16)).ok());
}

TEST(UpperBoundTest, Examples) {
  EXPECT_EQ(*UpperBoundThroughput(40, 3e9, 1e4, 1), 1.2e7);
  EXPECT_EQ(*UpperBoundThroughput(1, 1, 1, 1), 1.0);
  EXPECT_EQ(*UpperBoundThroughput(40, 3e9, 1e4, 2), 6e6);
}

TEST(UpperBoundTest, RejectsNonPositiveInputs) {
  EXPECT_TRUE(absl::IsInvalidArgument(UpperBoundThroughput(0, 1, 1, 1).status()));
  EXPECT_TRUE(absl::IsInvalidArgument(UpperBoundThroughput(1, 0, 1, 1).status()));
  EXPECT_TRUE(absl::IsInvalidArgument(UpperBoundThroughput(1, 1, 0, 1).status()));
  EXPECT_TRUE(absl::IsInvalidArgument(UpperBoundThroughput(1, 1, 1, -2).status()));
}

// Acquires that conflict must block until the holder releases.
template <typename Client>
void ExpectBlockingHandOff(Client& first, Client& second) {
  ASSERT_TRUE(first.Acquire(0, E).ok());
  std::atomic<bool> granted{false};
  auto waiter = std::async(std::launch::async, [&] {
    absl::Status s = second.Acquire(0, S);
    granted = true;
    return s;
  });
  std::this_thread::sleep_for(std::chrono::milliseconds(50));
  EXPECT_FALSE(granted.load());
  ASSERT_TRUE(first.Release(0).ok());
  EXPECT_TRUE(waiter.get().ok());
  EXPECT_TRUE(second.Release(0).ok());
  EXPECT_TRUE(absl::IsFailedPrecondition(second.Release(0)));
}

TEST(TcpFrontendTest, AssignsIdsAndHandsOff) {
  checker::TraceSink sink;
  LockManager m(2, &sink);
  TcpFrontend frontend(m, FrontendOptions{});
  ASSERT_TRUE(frontend.Bind(0).ok());
  frontend.Start();
  auto a = TcpFrontendClient::Connect("127.0.0.1", frontend.port());
  auto b = TcpFrontendClient::Connect("127.0.0.1", frontend.port());
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_EQ((*a)->client_id(), 1u);
  EXPECT_EQ((*b)->client_id(), 2u);
  ExpectBlockingHandOff(**a, **b);
  a->reset();
  b->reset();
  frontend.Stop();
  std::vector<checker::TraceEvent> trace = sink.Snapshot();
  EXPECT_EQ(trace.size(), 8u);
  EXPECT_TRUE(checker::CheckAll(trace, Design::kServerTcp).empty());
}

TEST(TcpFrontendTest, ChargesMessageCost) {
  LockManager m(1);
  FrontendOptions options;
  options.per_message_cost = std::chrono::milliseconds(5);
  TcpFrontend frontend(m, options);
  ASSERT_TRUE(frontend.Bind(0).ok());
  frontend.Start();
  auto c = TcpFrontendClient::Connect("127.0.0.1", frontend.port());
  ASSERT_TRUE(c.ok());
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < 4; ++i) {
    ASSERT_TRUE((*c)->Acquire(0, E).ok());
    ASSERT_TRUE((*c)->Release(0).ok());
  }
  EXPECT_GE(std::chrono::steady_clock::now() - start,
            std::chrono::milliseconds(40));
}

class SendRecvFrontendTest : public ::testing::TestWithParam<Transport> {};

TEST_P(SendRecvFrontendTest, HandsOffOverVerbs) {
  checker::TraceSink sink;
  LockManager m(2, &sink);
  auto node = std::make_shared<verbs::Node>();
  SendRecvFrontend frontend(m, node, FrontendOptions{});
  frontend.Start();
  std::unique_ptr<verbs::TcpVerbsServer> tcp;
  std::unique_ptr<verbs::Connector> connector;
  if (GetParam() == Transport::kTcp) {
    tcp = std::make_unique<verbs::TcpVerbsServer>(node);
    ASSERT_TRUE(tcp->Bind(0).ok());
    tcp->Start();
    connector = std::make_unique<verbs::TcpConnector>("127.0.0.1", tcp->port());
  } else {
    connector = std::make_unique<verbs::InProcConnector>(node);
  }
  auto ca = connector->Connect();
  auto cb = connector->Connect();
  ASSERT_TRUE(ca.ok() && cb.ok());
  SendRecvFrontendClient a(ca->qp, ca->info.peer_id);
  SendRecvFrontendClient b(cb->qp, cb->info.peer_id);
  ExpectBlockingHandOff(a, b);
  ca->qp->Close();
  cb->qp->Close();
  if (tcp) tcp->Stop();
  frontend.Stop();
  EXPECT_TRUE(checker::CheckAll(sink.Snapshot(), Design::kServerSendRecv).empty());
}

INSTANTIATE_TEST_SUITE_P(Transports, SendRecvFrontendTest,
                         ::testing::Values(Transport::kInProc, Transport::kTcp),
                         [](const auto& info) {
                           return info.param == Transport::kInProc ? "InProc"
                                                                   : "Tcp";
                         });

}  // namespace
}  // namespace dlm::server
