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

#include "dlm/bench/workload.h"

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <latch>
#include <memory>
#include <sstream>
#include <thread>

#include "absl/strings/str_cat.h"
#include "dlm/bench/host.h"
#include "dlm/common/clock.h"
#include "dlm/common/socket.h"
#include "dlm/locktable/lock_table.h"

namespace dlm::bench {
namespace {

struct ClientTally {
  absl::Status status;
  uint64_t granted = 0;
  uint64_t timeouts = 0;
  std::vector<int64_t> latencies_ns;
  int64_t start_ns = 0;
  int64_t end_ns = 0;
};

client::SessionOptions SessionOptionsFor(const WorkloadSpec& spec) {
  client::SessionOptions options;
  options.backoff = spec.backoff;
  options.max_retries = spec.max_retries;
  return options;
}

verbs::LinkOptions LinkOptionsFor(const WorkloadSpec& spec) {
  return verbs::LinkOptions{spec.verb_latency};
}

HostOptions HostOptionsFor(const WorkloadSpec& spec) {
  HostOptions options;
  options.design = spec.design;
  options.n_items = spec.n_items;
  options.frontend.per_message_cost = EffectiveMessageCost(spec);
  options.frontend.worker_limit = spec.worker_limit;
  options.frontend.max_connections =
      std::max<int>(1024, static_cast<int>(spec.n_clients));
  options.link = LinkOptionsFor(spec);
  return options;
}

void RunClient(LockClient& client, const std::vector<Operation>& ops,
               ClientTally& tally) {
  tally.latencies_ns.reserve(ops.size());
  for (const Operation& op : ops) {
    const int64_t start = MonotonicNanos();
    absl::Status s = client.Acquire(op.item, op.mode);
    if (absl::IsDeadlineExceeded(s)) {
      ++tally.timeouts;
      continue;
    }
    if (!s.ok()) {
      tally.status = s;
      return;
    }
    tally.latencies_ns.push_back(MonotonicNanos() - start);
    ++tally.granted;
    if (s = client.Release(op.item, op.mode); !s.ok()) {
      tally.status = s;
      return;
    }
  }
}

// From the first client's start to the last client's end.
double ElapsedSeconds(const std::vector<ClientTally>& tallies) {
  int64_t first_start = tallies[0].start_ns;
  int64_t last_end = tallies[0].end_ns;
  for (const ClientTally& t : tallies) {
    first_start = std::min(first_start, t.start_ns);
    last_end = std::max(last_end, t.end_ns);
  }
  return (last_end - first_start) / 1e9;
}

absl::Status Finish(const WorkloadSpec& spec, std::vector<ClientTally>& tallies,
                    double elapsed_s, std::vector<checker::TraceEvent> trace,
                    bool exact_server_trace, RunResult& result) {
  for (const ClientTally& t : tallies) {
    if (!t.status.ok()) return t.status;
  }
  absl::StatusOr<double> cr = ContentionRate(spec.n_items, spec.n_clients);
  if (!cr.ok()) return cr.status();
  result.contention_rate = *cr;
  result.elapsed_s = elapsed_s;
  for (ClientTally& t : tallies) {
    result.total_locks_granted += t.granted;
    result.timeouts += t.timeouts;
    result.per_client_latency.push_back(
        SummarizeLatencies(std::move(t.latencies_ns)));
  }
  result.throughput_lps =
      elapsed_s > 0 ? static_cast<double>(result.total_locks_granted) / elapsed_s
                    : 0;
  std::optional<Design> design;
  if (spec.design == Design::kClientCentric || exact_server_trace) {
    design = spec.design;
  }
  result.violations = checker::CheckAll(trace, design);
  result.trace = std::move(trace);
  return absl::OkStatus();
}

absl::StatusOr<RunResult> RunThreads(const WorkloadSpec& spec) {
  checker::TraceSink sink;
  std::unique_ptr<LockHost> host;
  std::string remote_host;
  uint16_t remote_port = 0;
  if (spec.connect.empty()) {
    absl::StatusOr<std::unique_ptr<LockHost>> created =
        LockHost::Create(HostOptionsFor(spec), &sink);
    if (!created.ok()) return created.status();
    host = *std::move(created);
    if (spec.design == Design::kServerTcp) {
      if (absl::Status s = host->Bind(0); !s.ok()) return s;
    }
    host->Start();
  } else if (absl::Status s =
                 ParseHostPort(spec.connect, &remote_host, &remote_port);
             !s.ok()) {
    return s;
  }

  const client::SessionOptions session = SessionOptionsFor(spec);
  // Server designs hosted here trace inside the lock manager; otherwise the
  // clients trace their own view.
  checker::TraceSink* client_sink =
      (host != nullptr && IsServerDesign(spec.design)) ? nullptr : &sink;
  std::vector<std::unique_ptr<LockClient>> clients;
  for (uint32_t i = 0; i < spec.n_clients; ++i) {
    absl::StatusOr<std::unique_ptr<LockClient>> c =
        host != nullptr
            ? host->ConnectLocal(session, LinkOptionsFor(spec), client_sink)
            : ConnectRemote(spec.design, remote_host, remote_port, session,
                            LinkOptionsFor(spec), client_sink);
    if (!c.ok()) {
      clients.clear();
      if (host) host->Stop();
      return c.status();
    }
    clients.push_back(*std::move(c));
  }

  std::vector<ClientTally> tallies(spec.n_clients);
  std::latch ready(spec.n_clients + 1);
  std::vector<std::thread> threads;
  for (uint32_t i = 0; i < spec.n_clients; ++i) {
    threads.emplace_back([&, i] {
      const std::vector<Operation> ops = GenerateRequests(spec, i);
      ready.arrive_and_wait();
      tallies[i].start_ns = MonotonicNanos();
      RunClient(*clients[i], ops, tallies[i]);
      tallies[i].end_ns = MonotonicNanos();
    });
  }
  ready.arrive_and_wait();
  for (std::thread& t : threads) t.join();
  const double elapsed_s = ElapsedSeconds(tallies);
  clients.clear();
  if (host) host->Stop();

  RunResult result;
  if (absl::Status s = Finish(spec, tallies, elapsed_s, sink.Snapshot(),
                              host != nullptr, result);
      !s.ok()) {
    return s;
  }
  return result;
}

// Client indices run by child process `process` of `processes`.
std::vector<uint32_t> ClientsOfProcess(uint32_t n_clients, uint32_t process,
                                       uint32_t processes) {
  std::vector<uint32_t> indices;
  for (uint32_t i = process; i < n_clients; i += processes) {
    indices.push_back(i);
  }
  return indices;
}

// Child side of the forked TCP run. Writes, per client,
//   <index> <granted> <timeouts> <start ns> <end ns>\n<latency ns...>\n
// then the client-side trace, or "error <message>" to `path`.
[[noreturn]] void ChildMain(const WorkloadSpec& spec,
                            const std::vector<uint32_t>& indices,
                            uint16_t port, const std::string& path) {
  checker::TraceSink sink;
  std::vector<ClientTally> tallies(indices.size());
  std::vector<std::unique_ptr<LockClient>> clients;
  absl::Status status;
  for (size_t k = 0; k < indices.size() && status.ok(); ++k) {
    absl::StatusOr<std::unique_ptr<LockClient>> client = ConnectRemote(
        spec.design, "127.0.0.1", port, SessionOptionsFor(spec),
        LinkOptionsFor(spec),
        spec.design == Design::kClientCentric ? &sink : nullptr);
    if (client.ok()) {
      clients.push_back(*std::move(client));
    } else {
      status = client.status();
    }
  }
  if (status.ok()) {
    std::vector<std::thread> threads;
    for (size_t k = 0; k < indices.size(); ++k) {
      threads.emplace_back([&, k] {
        const std::vector<Operation> ops = GenerateRequests(spec, indices[k]);
        tallies[k].start_ns = MonotonicNanos();
        RunClient(*clients[k], ops, tallies[k]);
        tallies[k].end_ns = MonotonicNanos();
      });
    }
    for (std::thread& t : threads) t.join();
    for (const ClientTally& t : tallies) {
      if (status.ok()) status = t.status;
    }
  }
  clients.clear();
  std::ofstream out(path);
  if (!status.ok()) {
    out << "error " << status.ToString() << '\n';
  } else {
    for (size_t k = 0; k < indices.size(); ++k) {
      const ClientTally& t = tallies[k];
      out << indices[k] << ' ' << t.granted << ' ' << t.timeouts << ' '
          << t.start_ns << ' ' << t.end_ns << '\n';
      for (int64_t ns : t.latencies_ns) out << ns << ' ';
      out << '\n';
    }
    (void)checker::WriteTrace(out, sink.Snapshot());
  }
  out.close();
  std::_Exit(out ? 0 : 1);
}

absl::Status ReadChildResult(const std::string& path, size_t n_clients,
                             std::vector<ClientTally>& tallies,
                             std::vector<checker::TraceEvent>& trace) {
  std::ifstream in(path);
  if (!in) return absl::InternalError(absl::StrCat("missing ", path));
  std::string line;
  for (size_t k = 0; k < n_clients; ++k) {
    std::getline(in, line);
    if (line.rfind("error ", 0) == 0) {
      return absl::UnavailableError(
          absl::StrCat("client process: ", line.substr(6)));
    }
    std::istringstream head(line);
    uint32_t index = 0;
    ClientTally t;
    if (!(head >> index >> t.granted >> t.timeouts >> t.start_ns >>
          t.end_ns) ||
        index >= tallies.size()) {
      return absl::DataLossError(absl::StrCat("bad result file ", path));
    }
    std::getline(in, line);
    std::istringstream lats(line);
    for (int64_t ns; lats >> ns;) t.latencies_ns.push_back(ns);
    tallies[index] = std::move(t);
  }
  absl::StatusOr<std::vector<checker::TraceEvent>> events =
      checker::ReadTrace(in);
  if (!events.ok()) return events.status();
  trace.insert(trace.end(), events->begin(), events->end());
  return absl::OkStatus();
}

absl::StatusOr<RunResult> RunProcesses(const WorkloadSpec& spec) {
  checker::TraceSink sink;
  absl::StatusOr<std::unique_ptr<LockHost>> host =
      LockHost::Create(HostOptionsFor(spec), &sink);
  if (!host.ok()) return host.status();
  if (absl::Status s = (*host)->Bind(0); !s.ok()) return s;

  std::string dir_template =
      (std::filesystem::temp_directory_path() / "dlmbench-XXXXXX").string();
  if (mkdtemp(dir_template.data()) == nullptr) {
    return absl::InternalError("mkdtemp failed");
  }
  const std::filesystem::path dir(dir_template);
  auto result_path = [&](uint32_t p) {
    return (dir / absl::StrCat("process-", p)).string();
  };
  const uint32_t processes =
      spec.client_processes == 0
          ? spec.n_clients
          : std::min(spec.client_processes, spec.n_clients);

  // Fork before any host thread exists.
  std::vector<pid_t> children;
  for (uint32_t p = 0; p < processes; ++p) {
    const pid_t pid = fork();
    if (pid == 0) {
      ChildMain(spec, ClientsOfProcess(spec.n_clients, p, processes),
                (*host)->port(), result_path(p));
    }
    if (pid < 0) break;
    children.push_back(pid);
  }
  (*host)->Start();
  bool all_exited_cleanly = children.size() == processes;
  for (pid_t pid : children) {
    int status = 0;
    while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
      all_exited_cleanly = false;
    }
  }
  (*host)->Stop();

  std::vector<ClientTally> tallies(spec.n_clients);
  std::vector<checker::TraceEvent> trace = sink.Snapshot();
  absl::Status read_status;
  for (uint32_t p = 0; p < processes && read_status.ok(); ++p) {
    read_status = ReadChildResult(
        result_path(p), ClientsOfProcess(spec.n_clients, p, processes).size(),
        tallies, trace);
  }
  std::error_code ignored;
  std::filesystem::remove_all(dir, ignored);
  if (!read_status.ok()) return read_status;
  if (!all_exited_cleanly) {
    return absl::InternalError("a client process failed");
  }
  const double elapsed_s = ElapsedSeconds(tallies);
  // Client processes share the host's CLOCK_MONOTONIC, so merged timestamps
  // are comparable.
  std::stable_sort(trace.begin(), trace.end(),
                   [](const checker::TraceEvent& a,
                      const checker::TraceEvent& b) {
                     return a.timestamp_ns < b.timestamp_ns;
                   });
  RunResult result;
  if (absl::Status s = Finish(spec, tallies, elapsed_s, std::move(trace),
                              /*exact_server_trace=*/true, result);
      !s.ok()) {
    return s;
  }
  return result;
}

}  // namespace

absl::Status Validate(const WorkloadSpec& spec) {
  if (spec.n_clients < 1 || spec.n_clients >= locktable::kMaxClients) {
    return absl::InvalidArgumentError(absl::StrCat(
        "n_clients must be in [1, ", locktable::kMaxClients - 1, "]"));
  }
  if (spec.n_items < 1) {
    return absl::InvalidArgumentError("n_items must be at least 1");
  }
  if (!(spec.shared_fraction >= 0 && spec.shared_fraction <= 1)) {
    return absl::InvalidArgumentError("shared_fraction must be in [0, 1]");
  }
  if (spec.per_message_cost.count() < 0 ||
      (spec.sr_per_message_cost && spec.sr_per_message_cost->count() < 0)) {
    return absl::InvalidArgumentError("per_message_cost must be >= 0");
  }
  if (spec.backoff.count() < 0 || spec.verb_latency.count() < 0) {
    return absl::InvalidArgumentError("backoff and latency must be >= 0");
  }
  if (spec.worker_limit < 1) {
    return absl::InvalidArgumentError("worker_limit must be at least 1");
  }
  if (!spec.connect.empty()) {
    std::string host;
    uint16_t port;
    return ParseHostPort(spec.connect, &host, &port);
  }
  return absl::OkStatus();
}

std::chrono::nanoseconds EffectiveMessageCost(const WorkloadSpec& spec) {
  switch (spec.design) {
    case Design::kServerTcp:
      return spec.per_message_cost;
    case Design::kServerSendRecv:
      return spec.sr_per_message_cost.value_or(spec.per_message_cost / 10);
    case Design::kClientCentric:
      return std::chrono::nanoseconds(0);
  }
  return std::chrono::nanoseconds(0);
}

RequestStream::RequestStream(uint64_t seed, uint32_t client_index,
                             uint32_t n_items, double shared_fraction)
    : item_(0, n_items - 1), shared_(shared_fraction) {
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                    client_index};
  rng_.seed(seq);
}

Operation RequestStream::Next() {
  Operation op;
  op.item = item_(rng_);
  op.mode = shared_(rng_) ? LockMode::kShared : LockMode::kExclusive;
  return op;
}

std::vector<Operation> GenerateRequests(const WorkloadSpec& spec,
                                        uint32_t client_index) {
  RequestStream stream(spec.rng_seed, client_index, spec.n_items,
                       spec.shared_fraction);
  std::vector<Operation> ops(spec.ops_per_client);
  for (Operation& op : ops) op = stream.Next();
  return ops;
}

absl::StatusOr<double> ContentionRate(uint32_t n_items, uint32_t n_clients) {
  if (n_clients == 0) {
    return absl::InvalidArgumentError("contention rate needs n_clients >= 1");
  }
  return 1.0 - static_cast<double>(n_items) / static_cast<double>(n_clients);
}

LatencyStats SummarizeLatencies(std::vector<int64_t> samples_ns) {
  LatencyStats stats;
  if (samples_ns.empty()) return stats;
  std::sort(samples_ns.begin(), samples_ns.end());
  const size_t n = samples_ns.size();
  double sum = 0;
  for (int64_t v : samples_ns) sum += static_cast<double>(v);
  auto rank = [&](double q) {
    return samples_ns[static_cast<size_t>(std::ceil(q * n)) - 1] / 1e3;
  };
  stats.count = n;
  stats.mean_us = sum / n / 1e3;
  stats.p50_us = rank(0.5);
  stats.p99_us = rank(0.99);
  stats.max_us = samples_ns.back() / 1e3;
  return stats;
}

absl::StatusOr<RunResult> RunWorkload(const WorkloadSpec& spec) {
  if (absl::Status s = Validate(spec); !s.ok()) return s;
  if (spec.transport == Transport::kTcp && spec.connect.empty()) {
    return RunProcesses(spec);
  }
  return RunThreads(spec);
}

}  // namespace dlm::bench
