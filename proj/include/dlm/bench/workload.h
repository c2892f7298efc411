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

#ifndef DLM_BENCH_WORKLOAD_H_
#define DLM_BENCH_WORKLOAD_H_

#include <chrono>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dlm/checker/checker.h"
#include "dlm/checker/trace.h"
#include "dlm/common/types.h"

namespace dlm::bench {

struct WorkloadSpec {
  Design design = Design::kClientCentric;
  Transport transport = Transport::kInProc;
  uint32_t n_clients = 8;
  uint32_t n_items = 100;
  uint64_t ops_per_client = 1000;
  double shared_fraction = 0.5;
  uint64_t rng_seed = 1;

  // Client-centric retry policy.
  std::chrono::nanoseconds backoff{0};
  std::optional<uint64_t> max_retries;

  // Message cost of the server-tcp frontend.
  std::chrono::nanoseconds per_message_cost{std::chrono::microseconds(20)};
  // Message cost of the server-sr frontend; per_message_cost / 10 if unset.
  std::optional<std::chrono::nanoseconds> sr_per_message_cost;
  int worker_limit = 4;
  // One-way latency added to every verb.
  std::chrono::nanoseconds verb_latency{0};

  // Client processes of a TCP-transport run; clients are dealt round-robin
  // and run as threads within each. 0 gives every client its own process.
  uint32_t client_processes = 0;

  // host:port of a running `dlmbench server`. Empty runs a host in this
  // process. With a remote host the clients are threads here and record
  // their own trace.
  std::string connect;
};

absl::Status Validate(const WorkloadSpec& spec);

// Cost charged per message by the frontend of `spec.design`.
std::chrono::nanoseconds EffectiveMessageCost(const WorkloadSpec& spec);

struct Operation {
  uint32_t item = 0;
  LockMode mode = LockMode::kExclusive;

  friend bool operator==(const Operation&, const Operation&) = default;
};

// Per-client request sequence: uniform items, SHARED with probability
// shared_fraction. Depends only on (seed, client_index, n_items,
// shared_fraction).
class RequestStream {
 public:
  RequestStream(uint64_t seed, uint32_t client_index, uint32_t n_items,
                double shared_fraction);

  Operation Next();

 private:
  std::mt19937_64 rng_;
  std::uniform_int_distribution<uint32_t> item_;
  std::bernoulli_distribution shared_;
};

std::vector<Operation> GenerateRequests(const WorkloadSpec& spec,
                                        uint32_t client_index);

// 1 - n_items / n_clients. Negative when items outnumber clients.
absl::StatusOr<double> ContentionRate(uint32_t n_items, uint32_t n_clients);

struct LatencyStats {
  uint64_t count = 0;
  double mean_us = 0;
  double p50_us = 0;
  double p99_us = 0;
  double max_us = 0;
};

// Acquire latencies in nanoseconds.
LatencyStats SummarizeLatencies(std::vector<int64_t> samples_ns);

struct RunResult {
  uint64_t total_locks_granted = 0;
  uint64_t timeouts = 0;
  double elapsed_s = 0;
  double throughput_lps = 0;
  double contention_rate = 0;
  std::vector<LatencyStats> per_client_latency;
  std::vector<checker::TraceEvent> trace;
  std::vector<checker::Violation> violations;
};

// Runs the closed-loop workload and checks its trace. A run whose trace has
// violations still returns a result; callers must not report its
// throughput.
absl::StatusOr<RunResult> RunWorkload(const WorkloadSpec& spec);

}  // namespace dlm::bench

#endif  // DLM_BENCH_WORKLOAD_H_
