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
#include <thread>
#include <vector>

#include "dlm/verbs/inproc.h"
#include "gtest/gtest.h"
#include "support/atomics_history.h"
#include "support/endpoint.h"
#include "support/lock_model.h"

namespace dlm::testing {
namespace {

class AtomicsTest : public ::testing::TestWithParam<Transport> {};

TEST_P(AtomicsTest, MixedHistoryIsLinearizable) {
  const uint32_t ops = GetParam() == Transport::kInProc ? 1250 : 250;
  absl::StatusOr<AtomicHistory> h = RunAtomicHistory(GetParam(), 8, ops, 7);
  ASSERT_TRUE(h.ok()) << h.status();
  std::optional<Linearization> lin = Linearize(*h);
  ASSERT_TRUE(lin.has_value());
  EXPECT_EQ(lin->order.size(), 8u * ops);
  EXPECT_EQ(lin->final_word, h->final_word);
  EXPECT_GT(SuccessfulCasCount(*h), 0u);
  EXPECT_EQ(DuplicateCasEpochs(*h), 0u);
}

TEST(AtomicsTest, OverlappingHistoryWithLatencyIsLinearizable) {
  absl::StatusOr<AtomicHistory> h =
      RunAtomicHistory(Transport::kInProc, 8, 250, 11,
                       verbs::LinkOptions{std::chrono::microseconds(1)});
  ASSERT_TRUE(h.ok()) << h.status();
  EXPECT_GT(OverlappingOps(*h), 100u);
  std::optional<Linearization> lin = Linearize(*h);
  ASSERT_TRUE(lin.has_value());
  EXPECT_EQ(lin->final_word, h->final_word);
  EXPECT_EQ(DuplicateCasEpochs(*h), 0u);
}

INSTANTIATE_TEST_SUITE_P(Transports, AtomicsTest,
                         ::testing::Values(Transport::kInProc, Transport::kTcp),
                         [](const auto& info) {
                           return TransportParamName(info.param);
                         });

TEST(AtomicsTest, CheckerRejectsImpossibleRead) {
  AtomicHistory h;
  h.actors = 2;
  h.ops.resize(2);
  AtomicOp fa{0, AtomicKind::kFetchAdd, 1, 0, 0, 0, 10};
  // Read invoked after the add completed but claims to see the old word.
  AtomicOp read{1, AtomicKind::kRead, 0, 0, 0, 20, 30};
  h.ops[0].push_back(fa);
  h.ops[1].push_back(read);
  h.final_word = 1;
  EXPECT_FALSE(Linearize(h).has_value());
  // Overlapping in time, the same read is fine.
  h.ops[1][0].invoke_ns = 5;
  EXPECT_TRUE(Linearize(h).has_value());
}

TEST(AtomicsTest, FinalWordMustBeExplained) {
  AtomicHistory h;
  h.actors = 2;
  h.ops.resize(2);
  h.ops[0].push_back({0, AtomicKind::kWriteLow, 5, 0, 0, 0, 10});
  h.ops[1].push_back({1, AtomicKind::kWriteLow, 9, 0, 0, 0, 10});
  for (uint64_t final_word : {5, 9}) {
    h.final_word = final_word;
    std::optional<Linearization> lin = Linearize(h);
    ASSERT_TRUE(lin.has_value());
    EXPECT_EQ(lin->final_word, final_word);
  }
  h.final_word = 14;
  EXPECT_FALSE(Linearize(h).has_value());
}

TEST(AtomicsTest, CheckerRejectsDoubleCasSuccess) {
  AtomicHistory h;
  h.actors = 2;
  h.ops.resize(2);
  const uint64_t tag = (uint64_t{0x80000000u} << 32) | kCasLowTag;
  h.ops[0].push_back({0, AtomicKind::kCas, 0, tag, 0, 0, 10});
  h.ops[1].push_back({1, AtomicKind::kCas, 0, tag + (1ull << 32), 0, 0, 10});
  EXPECT_FALSE(Linearize(h).has_value());
}

TEST(AtomicsTest, FetchAddOldValuesArePermutation) {
  auto host = std::make_shared<verbs::Node>();
  auto region = *host->RegisterRegion(8);
  host->Export(*region);
  verbs::InProcConnector connector(host);
  constexpr uint32_t kActors = 8, kOps = 1000;
  std::vector<std::vector<uint64_t>> seen(kActors);
  std::vector<std::thread> threads;
  for (uint32_t a = 0; a < kActors; ++a) {
    verbs::Connection c = *connector.Connect();
    host->Accept();
    threads.emplace_back([&, a, qp = c.qp] {
      for (uint32_t i = 0; i < kOps; ++i) {
        seen[a].push_back(qp->FetchAdd({region->id(), 0}, 1).old_value());
      }
    });
  }
  for (std::thread& t : threads) t.join();
  std::vector<uint64_t> all;
  for (const auto& v : seen) {
    EXPECT_TRUE(std::is_sorted(v.begin(), v.end()));
    all.insert(all.end(), v.begin(), v.end());
  }
  std::sort(all.begin(), all.end());
  for (uint64_t i = 0; i < all.size(); ++i) ASSERT_EQ(all[i], i);
  EXPECT_EQ(region->LoadWord(0), uint64_t{kActors} * kOps);
  host->Shutdown();
}

const std::vector<std::vector<LockMode>> kModePairs = {
    {LockMode::kShared, LockMode::kShared},
    {LockMode::kShared, LockMode::kExclusive},
    {LockMode::kExclusive, LockMode::kShared},
    {LockMode::kExclusive, LockMode::kExclusive},
};

TEST(LockModelTest, TwoClientsAllModePairsAreSafe) {
  for (const auto& modes : kModePairs) {
    ModelResult r = ExploreLockModel({modes, std::nullopt, ModelBug::kNone});
    EXPECT_GT(r.states, 4u);
    EXPECT_GT(r.terminal_states, 0u);
    EXPECT_EQ(r.unsafe_states, 0u) << r.first_problem;
    EXPECT_EQ(r.nonzero_terminals, 0u) << r.first_problem;
    EXPECT_EQ(r.stuck_states, 0u) << r.first_problem;
  }
}

TEST(LockModelTest, BoundedRetriesWithRollbackAreSafe) {
  for (uint32_t retries : {0u, 1u, 3u}) {
    for (const auto& modes : kModePairs) {
      ModelResult r = ExploreLockModel({modes, retries, ModelBug::kNone});
      EXPECT_EQ(r.unsafe_states, 0u) << r.first_problem;
      EXPECT_EQ(r.nonzero_terminals, 0u) << r.first_problem;
      EXPECT_EQ(r.stuck_states, 0u) << r.first_problem;
    }
  }
}

TEST(LockModelTest, ThreeClientsAreSafe) {
  const LockMode S = LockMode::kShared, E = LockMode::kExclusive;
  for (const auto& modes : std::vector<std::vector<LockMode>>{
           {S, S, E}, {E, S, E}, {E, E, E}, {S, E, S}}) {
    ModelResult r = ExploreLockModel({modes, 2u, ModelBug::kNone});
    EXPECT_EQ(r.unsafe_states, 0u) << r.first_problem;
    EXPECT_EQ(r.nonzero_terminals, 0u) << r.first_problem;
  }
}

TEST(LockModelTest, DetectsSharedIgnoringOwner) {
  ModelResult r = ExploreLockModel(
      {{LockMode::kExclusive, LockMode::kShared}, std::nullopt,
       ModelBug::kSharedIgnoresOwner});
  EXPECT_GT(r.unsafe_states, 0u);
}

TEST(LockModelTest, DetectsExclusiveClearingWholeWord) {
  ModelResult r = ExploreLockModel(
      {{LockMode::kExclusive, LockMode::kShared}, std::nullopt,
       ModelBug::kExclusiveClearsWholeWord});
  EXPECT_GT(r.nonzero_terminals + r.unsafe_states, 0u);
}

}  // namespace
}  // namespace dlm::testing
