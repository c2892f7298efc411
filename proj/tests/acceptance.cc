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

// Acceptance gate: runs every acceptance criterion once and prints one
// "[ACCEPTANCE] PASS|FAIL <name>: <detail>" line each. Exits non-zero if any
// criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "dlm/bench/workload.h"
#include "dlm/locktable/lock_table.h"
#include "dlm/server/upper_bound.h"
#include "dlm/verbs/inproc.h"
#include "support/atomics_history.h"
#include "support/lock_model.h"

namespace dlm {
namespace {

using bench::RunResult;
using bench::RunWorkload;
using bench::WorkloadSpec;

struct Verdict {
  bool pass = false;
  std::string detail;
};

constexpr Design kDesigns[] = {Design::kClientCentric, Design::kServerSendRecv,
                               Design::kServerTcp};

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since)
      .count();
}

// Runs the randomized safety suite on `transport`.
Verdict SafetySuite(Transport transport, uint32_t client_processes,
                    double budget_s) {
  const auto start = std::chrono::steady_clock::now();
  int clean = 0, runs = 0;
  std::string first_failure;
  for (Design design : kDesigns) {
    for (uint64_t seed = 1; seed <= 50; ++seed) {
      WorkloadSpec spec;
      spec.design = design;
      spec.transport = transport;
      spec.client_processes = client_processes;
      spec.n_clients = 8;
      spec.n_items = 4;
      spec.ops_per_client = 500;
      spec.shared_fraction = 0.5;
      spec.rng_seed = seed;
      absl::StatusOr<RunResult> r = RunWorkload(spec);
      ++runs;
      const bool ok = r.ok() && r->violations.empty() &&
                      r->total_locks_granted == 8 * 500;
      clean += ok;
      if (!ok && first_failure.empty()) {
        first_failure = absl::StrCat(
            DesignName(design), " seed ", seed, ": ",
            r.ok() ? absl::StrCat(r->violations.size(), " violations, ",
                                  r->total_locks_granted, " grants")
                   : r.status().ToString());
      }
    }
  }
  const double t = Seconds(start);
  return {clean == runs && t < budget_s,
          absl::StrFormat("%d/%d runs clean in %.1fs (budget %.0fs)%s", clean,
                          runs, t, budget_s,
                          first_failure.empty() ? "" : "; " + first_failure)};
}

Verdict AtomicsLinearizability() {
  const auto start = std::chrono::steady_clock::now();
  struct Config {
    const char* name;
    Transport transport;
    std::chrono::nanoseconds latency;
  };
  const Config configs[] = {
      {"inproc", Transport::kInProc, std::chrono::nanoseconds(0)},
      {"inproc+1us", Transport::kInProc, std::chrono::microseconds(1)},
      {"tcp", Transport::kTcp, std::chrono::nanoseconds(0)},
  };
  bool pass = true;
  std::string detail;
  for (const Config& c : configs) {
    absl::StatusOr<testing::AtomicHistory> h = testing::RunAtomicHistory(
        c.transport, 8, 1250, 2026, verbs::LinkOptions{c.latency});
    if (!h.ok()) return {false, h.status().ToString()};
    std::optional<testing::Linearization> lin = testing::Linearize(*h);
    const uint64_t dup = testing::DuplicateCasEpochs(*h);
    const bool final_matches = lin && lin->final_word == h->final_word;
    pass = pass && lin.has_value() && lin->order.size() == 10000 &&
           final_matches && dup == 0;
    absl::StrAppendFormat(
        &detail, "%s%s: %s, final word %s, %d successful CAS, %d duplicate "
        "epochs, %d overlapping ops",
        detail.empty() ? "" : "; ", c.name,
        lin ? "linearizable" : "NOT LINEARIZABLE",
        final_matches ? "matches replay" : "MISMATCH",
        testing::SuccessfulCasCount(*h), dup, testing::OverlappingOps(*h));
  }
  const double t = Seconds(start);
  // The 10 s budget covers each 10,000-op history; three are run.
  return {pass && t < 30, absl::StrFormat("%s; %.2fs", detail, t)};
}

// Little-endian byte image of (owner, count), built byte by byte.
std::array<uint8_t, 8> WordBytes(uint32_t owner, uint32_t count) {
  std::array<uint8_t, 8> b{};
  for (int i = 0; i < 4; ++i) {
    b[i] = static_cast<uint8_t>(count >> (8 * i));
    b[4 + i] = static_cast<uint8_t>(owner >> (8 * i));
  }
  return b;
}

uint32_t Le32(const std::vector<uint8_t>& b) {
  return uint32_t{b[0]} | uint32_t{b[1]} << 8 | uint32_t{b[2]} << 16 |
         uint32_t{b[3]} << 24;
}

Verdict CodecBridges() {
  auto host = std::make_shared<verbs::Node>();
  auto region = *host->RegisterRegion(8);
  host->Export(*region);
  verbs::InProcConnector connector(host);
  verbs::Connection conn = *connector.Connect();
  auto host_end = host->Accept();
  verbs::QueuePair& qp = *conn.qp;
  const verbs::RemoteAddress word{region->id(), 0};
  const verbs::RemoteAddress owner_half{region->id(), 4};

  std::mt19937_64 rng(99);
  uint64_t failures = 0;
  auto check_pair = [&](uint32_t owner, uint32_t count) {
    const std::array<uint8_t, 8> image = WordBytes(owner, count);
    const uint64_t encoded = locktable::Encode(owner, count);
    uint64_t from_bytes = 0;
    for (int i = 7; i >= 0; --i) from_bytes = (from_bytes << 8) | image[i];
    if (encoded != from_bytes ||
        !(locktable::Decode(encoded) == locktable::LockWord{owner, count})) {
      ++failures;
      return;
    }
    (void)qp.Write(word, image);
    // FA(+1) bumps only the low half.
    const verbs::Completion inc = qp.FetchAdd(word, 1);
    const std::vector<uint8_t> low = qp.Read(word, 4).payload;
    const std::vector<uint8_t> high = qp.Read(owner_half, 4).payload;
    if (inc.old_value() != encoded || Le32(low) != count + 1 ||
        Le32(high) != owner) {
      ++failures;
    }
    // FA(2^64-1) undoes it exactly.
    const verbs::Completion dec = qp.FetchAdd(word, locktable::kDecrement);
    if (dec.old_value() != locktable::Encode(owner, count + 1) ||
        region->LoadWord(0) != encoded) {
      ++failures;
    }
  };
  constexpr int kPairs = 100000;
  for (int i = 0; i < kPairs; ++i) {
    const uint32_t owner = static_cast<uint32_t>(rng());
    // Leave room for the +1 so it cannot carry into the owner half.
    const uint32_t count = static_cast<uint32_t>(rng() % 0xFFFFFFFFull);
    check_pair(owner, count);
  }
  check_pair(0, 0);
  check_pair(0xFFFFFFFFu, 0xFFFFFFFEu);
  // Decrement from a positive count, then from a zero count with an owner:
  // the latter borrows from the owner half, which is why shared counts must
  // never go negative.
  region->StoreWord(0, locktable::Encode(7, 1));
  (void)qp.FetchAdd(word, locktable::kDecrement);
  if (region->LoadWord(0) != locktable::Encode(7, 0)) ++failures;
  (void)qp.FetchAdd(word, locktable::kDecrement);
  if (region->LoadWord(0) != locktable::Encode(6, 0xFFFFFFFFu)) ++failures;
  conn.qp->Close();
  host->Shutdown();
  return {failures == 0,
          absl::StrCat(kPairs, " random pairs + edge cases, ", failures,
                       " mismatches")};
}

WorkloadSpec ShapeSpec(Design design, uint32_t clients, uint64_t seed) {
  WorkloadSpec spec;
  spec.design = design;
  spec.n_clients = clients;
  spec.n_items = 100;
  spec.ops_per_client = 3200 / clients;
  spec.per_message_cost = std::chrono::microseconds(20);
  spec.sr_per_message_cost = std::chrono::microseconds(2);
  spec.worker_limit = 4;
  spec.rng_seed = seed;
  return spec;
}

double Throughput(const WorkloadSpec& spec, std::string& error) {
  absl::StatusOr<RunResult> r = RunWorkload(spec);
  if (!r.ok()) {
    error = r.status().ToString();
    return -1;
  }
  if (!r->violations.empty()) {
    error = absl::StrCat(r->violations.size(), " violations");
    return -1;
  }
  return r->throughput_lps;
}

Verdict ServerThroughputShape() {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<uint32_t> counts = {1, 2, 4, 8, 16};
  int good = 0;
  std::string notes, error;
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    std::vector<double> tcp, sr;
    for (uint32_t c : counts) {
      tcp.push_back(Throughput(ShapeSpec(Design::kServerTcp, c, seed), error));
      sr.push_back(
          Throughput(ShapeSpec(Design::kServerSendRecv, c, seed), error));
    }
    bool ok = error.empty();
    for (size_t i = 2; i < counts.size(); ++i) ok = ok && sr[i] > tcp[i];
    const double plateau = std::abs(tcp[4] - tcp[3]) / tcp[3];
    ok = ok && plateau <= 0.25;
    good += ok;
    if (seed == 1) {
      notes = absl::StrFormat(
          "seed 1: tcp@8=%.0f tcp@16=%.0f (%.1f%%) sr@8=%.0f sr@16=%.0f",
          tcp[3], tcp[4], 100 * plateau, sr[3], sr[4]);
    }
  }
  const double t = Seconds(start);
  return {good >= 9 && t < 120,
          absl::StrFormat("%d/10 seeds hold, %.1fs; %s%s", good, t, notes,
                          error.empty() ? "" : "; error: " + error)};
}

Verdict ClientCentricVsServer() {
  const auto start = std::chrono::steady_clock::now();
  int good = 0;
  std::string notes, error;
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    bool ok = true;
    for (uint32_t c : {8u, 16u}) {
      const double cc =
          Throughput(ShapeSpec(Design::kClientCentric, c, seed), error);
      const double sr =
          Throughput(ShapeSpec(Design::kServerSendRecv, c, seed), error);
      ok = ok && error.empty() && cc > sr;
      if (seed == 1) {
        notes += absl::StrFormat(" cc@%d=%.0f sr@%d=%.0f", c, cc, c, sr);
      }
    }
    good += ok;
  }
  const double t = Seconds(start);
  return {good >= 9 && t < 120,
          absl::StrFormat("%d/10 seeds hold, %.1fs; seed 1:%s%s", good, t,
                          notes, error.empty() ? "" : "; error: " + error)};
}

// Uses a 1 us one-way verb latency. With zero latency on a single core an
// in-process client finishes each lock inside one scheduler slice, so
// clients almost never overlap and the item count has no effect. The
// zero-latency pair for seed 1 is reported for reference.
Verdict ContentionTrend() {
  const auto start = std::chrono::steady_clock::now();
  int good = 0;
  std::string notes, error;
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    WorkloadSpec spec = ShapeSpec(Design::kClientCentric, 16, seed);
    spec.ops_per_client = 500;
    spec.verb_latency = std::chrono::microseconds(1);
    spec.n_items = 16;
    const double low = Throughput(spec, error);
    spec.n_items = 2;
    const double high = Throughput(spec, error);
    good += error.empty() && high < low;
    if (seed == 1) {
      spec.verb_latency = std::chrono::nanoseconds(0);
      spec.n_items = 16;
      const double low0 = Throughput(spec, error);
      spec.n_items = 2;
      const double high0 = Throughput(spec, error);
      notes = absl::StrFormat(
          "seed 1: CR=0 %.0f, CR=0.875 %.0f (zero latency: %.0f vs %.0f)", low,
          high, low0, high0);
    }
  }
  const double t = Seconds(start);
  return {good >= 9 && t < 120,
          absl::StrFormat("%d/10 seeds hold, %.1fs; %s%s", good, t, notes,
                          error.empty() ? "" : "; error: " + error)};
}

Verdict UpperBound() {
  absl::StatusOr<double> v = server::UpperBoundThroughput(40, 3e9, 1e4, 1);
  // 40 cores * 3e9 cycles/s / 1e4 cycles per message / 1 message.
  const double expected = 40.0 * 3e9 / 1e4 / 1.0;
  return {v.ok() && *v == expected && expected == 1.2e7,
          v.ok() ? absl::StrFormat("%.1f locks/s", *v) : v.status().ToString()};
}

Verdict ModelCheck() {
  const auto start = std::chrono::steady_clock::now();
  const LockMode S = LockMode::kShared, E = LockMode::kExclusive;
  uint64_t states = 0, bad = 0;
  for (const auto& modes : std::vector<std::vector<LockMode>>{
           {S, S}, {S, E}, {E, S}, {E, E}}) {
    testing::ModelResult r = testing::ExploreLockModel(
        {modes, std::nullopt, testing::ModelBug::kNone});
    states += r.states;
    bad += r.unsafe_states + r.nonzero_terminals + r.stuck_states +
           (r.terminal_states == 0);
  }
  const double t = Seconds(start);
  return {bad == 0 && t < 10,
          absl::StrFormat("4 mode pairs, %d states, %d bad, %.3fs", states,
                          bad, t)};
}

}  // namespace
}  // namespace dlm

// With arguments, runs only the criteria named.
int main(int argc, char** argv) {
  const std::vector<std::string> only(argv + 1, argv + argc);
  using dlm::Verdict;
  const std::vector<std::pair<std::string, std::function<Verdict()>>>
      criteria = {
          {"safety-suite-inproc",
           [] {
             return dlm::SafetySuite(dlm::Transport::kInProc, 0, 60);
           }},
          {"atomics-linearizability", dlm::AtomicsLinearizability},
          {"codec-and-bridges", dlm::CodecBridges},
          {"server-throughput-shape", dlm::ServerThroughputShape},
          {"client-centric-beats-sr", dlm::ClientCentricVsServer},
          {"contention-trend", dlm::ContentionTrend},
          {"upper-bound-formula", dlm::UpperBound},
          {"exhaustive-model-check", dlm::ModelCheck},
          {"transport-equivalence-tcp",
           [] { return dlm::SafetySuite(dlm::Transport::kTcp, 4, 120); }},
      };
  int failed = 0;
  size_t ran = 0;
  for (const auto& [name, run] : criteria) {
    if (!only.empty() &&
        std::find(only.begin(), only.end(), name) == only.end()) {
      continue;
    }
    ++ran;
    const Verdict v = run();
    failed += !v.pass;
    std::printf("[ACCEPTANCE] %s %s: %s\n", v.pass ? "PASS" : "FAIL",
                name.c_str(), v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("[ACCEPTANCE] %zu/%zu criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}
