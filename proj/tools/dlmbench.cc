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

// dlmbench: run a lock host, drive workloads against it, or check a trace.

#include <signal.h>

#include <cerrno>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "dlm/bench/host.h"
#include "dlm/bench/sweep.h"
#include "dlm/bench/workload.h"
#include "dlm/checker/checker.h"
#include "dlm/checker/trace.h"
#include "dlm/common/types.h"

namespace {

using std::chrono::microseconds;
using std::chrono::nanoseconds;

template <typename T>
T OrDie(absl::StatusOr<T> value) {
  if (!value.ok()) {
    std::cerr << "error: " << value.status() << '\n';
    std::exit(2);
  }
  return *std::move(value);
}

nanoseconds Micros(double us) {
  return nanoseconds(static_cast<int64_t>(us * 1e3));
}

struct ServerArgs {
  std::string design = "server-tcp";
  uint32_t items = 100;
  uint16_t port = 0;
  double cost_us = 20;
  std::optional<double> sr_cost_us;
  int workers = 4;
  double duration_s = 0;
  std::string trace;
};

int RunServer(const ServerArgs& args) {
  dlm::bench::WorkloadSpec shape;
  shape.design = OrDie(dlm::ParseDesign(args.design));
  shape.per_message_cost = Micros(args.cost_us);
  if (args.sr_cost_us) shape.sr_per_message_cost = Micros(*args.sr_cost_us);

  dlm::bench::HostOptions options;
  options.design = shape.design;
  options.n_items = args.items;
  options.frontend.per_message_cost =
      dlm::bench::EffectiveMessageCost(shape);
  options.frontend.worker_limit = args.workers;

  // Block the stop signals before any thread starts so sigtimedwait below
  // is the only receiver.
  sigset_t stop_signals;
  sigemptyset(&stop_signals);
  sigaddset(&stop_signals, SIGINT);
  sigaddset(&stop_signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);

  dlm::checker::TraceSink sink;
  std::unique_ptr<dlm::bench::LockHost> host =
      OrDie(dlm::bench::LockHost::Create(options, &sink));
  if (absl::Status s = host->Bind(args.port); !s.ok()) {
    std::cerr << "error: " << s << '\n';
    return 2;
  }
  host->Start();
  std::cout << "listening on port " << host->port() << std::endl;

  if (args.duration_s > 0) {
    const auto total = Micros(args.duration_s * 1e6);
    timespec wait{static_cast<time_t>(total.count() / 1000000000),
                  static_cast<long>(total.count() % 1000000000)};
    while (sigtimedwait(&stop_signals, nullptr, &wait) < 0 && errno == EINTR) {
    }
  } else {
    int sig;
    sigwait(&stop_signals, &sig);
  }
  host->Stop();

  if (!args.trace.empty()) {
    if (shape.design == dlm::Design::kClientCentric) {
      std::cerr << "note: a client-centric host runs no lock logic; clients "
                   "record the trace\n";
    }
    if (absl::Status s = dlm::checker::WriteTraceFile(args.trace,
                                                      sink.Snapshot());
        !s.ok()) {
      std::cerr << "error: " << s << '\n';
      return 2;
    }
  }
  return 0;
}

struct BenchArgs {
  std::string design = "client-centric";
  std::string transport = "inproc";
  uint32_t clients = 8;
  uint32_t items = 100;
  uint64_t ops = 1000;
  double shared_fraction = 0.5;
  double backoff_us = 0;
  std::optional<uint64_t> max_retries;
  double cost_us = 20;
  std::optional<double> sr_cost_us;
  int workers = 4;
  double verb_latency_us = 0;
  uint64_t seed = 1;
  uint32_t client_processes = 0;
  std::string csv;
  std::string trace;
  std::string connect;
  std::vector<uint32_t> sweep_clients;
  std::vector<uint32_t> sweep_items;
};

int RunBench(const BenchArgs& args) {
  dlm::bench::WorkloadSpec spec;
  spec.design = OrDie(dlm::ParseDesign(args.design));
  spec.transport = OrDie(dlm::ParseTransport(args.transport));
  spec.n_clients = args.clients;
  spec.n_items = args.items;
  spec.ops_per_client = args.ops;
  spec.shared_fraction = args.shared_fraction;
  spec.backoff = Micros(args.backoff_us);
  spec.max_retries = args.max_retries;
  spec.per_message_cost = Micros(args.cost_us);
  if (args.sr_cost_us) spec.sr_per_message_cost = Micros(*args.sr_cost_us);
  spec.worker_limit = args.workers;
  spec.verb_latency = Micros(args.verb_latency_us);
  spec.rng_seed = args.seed;
  spec.client_processes = args.client_processes;
  spec.connect = args.connect;
  if (!spec.connect.empty()) spec.transport = dlm::Transport::kTcp;
  if (absl::Status s = dlm::bench::Validate(spec); !s.ok()) {
    std::cerr << "error: " << s << '\n';
    return 2;
  }

  std::vector<dlm::bench::SweepPoint> points;
  if (!args.sweep_clients.empty()) {
    points = dlm::bench::SweepClients(spec, args.sweep_clients);
  } else if (!args.sweep_items.empty()) {
    points = dlm::bench::SweepContention(spec, args.sweep_items);
  } else {
    points.push_back({spec, dlm::bench::RunWorkload(spec)});
  }

  std::ofstream csv_file;
  if (!args.csv.empty()) {
    csv_file.open(args.csv);
    if (!csv_file) {
      std::cerr << "error: cannot open " << args.csv << '\n';
      return 2;
    }
  }
  std::ostream& csv = args.csv.empty() ? std::cout : csv_file;
  csv << dlm::bench::CsvHeader() << '\n';

  int rc = 0;
  for (const dlm::bench::SweepPoint& p : points) {
    csv << dlm::bench::FormatCsvRow(p) << '\n';
    if (!p.result.ok()) {
      std::cerr << "run failed (" << p.spec.n_clients << " clients, "
                << p.spec.n_items << " items): " << p.result.status() << '\n';
      rc = 1;
      continue;
    }
    for (const dlm::checker::Violation& v : p.result->violations) {
      std::cerr << dlm::checker::FormatViolation(v) << '\n';
      rc = 1;
    }
    if (p.result->timeouts > 0) {
      std::cerr << p.result->timeouts << " acquires timed out\n";
    }
  }
  if (!args.trace.empty() && points.back().result.ok()) {
    if (absl::Status s = dlm::checker::WriteTraceFile(
            args.trace, points.back().result->trace);
        !s.ok()) {
      std::cerr << "error: " << s << '\n';
      return 2;
    }
  }
  return rc;
}

int RunCheck(const std::string& trace_path, const std::string& design_name) {
  std::vector<dlm::checker::TraceEvent> trace =
      OrDie(dlm::checker::ReadTraceFile(trace_path));
  std::optional<dlm::Design> design;
  if (!design_name.empty()) design = OrDie(dlm::ParseDesign(design_name));
  const std::vector<dlm::checker::Violation> violations =
      dlm::checker::CheckAll(trace, design);
  for (const dlm::checker::Violation& v : violations) {
    std::cout << dlm::checker::FormatViolation(v) << '\n';
  }
  std::cerr << trace.size() << " events, " << violations.size()
            << " violations\n";
  return violations.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed lock manager workbench"};
  app.require_subcommand(1);
  const std::vector<std::string> designs = {"server-tcp", "server-sr",
                                            "client-centric"};

  ServerArgs server;
  CLI::App* server_cmd =
      app.add_subcommand("server", "Host a lock table or a lock manager");
  server_cmd->add_option("--design", server.design)
      ->check(CLI::IsMember(designs));
  server_cmd->add_option("--items", server.items)->check(CLI::PositiveNumber);
  server_cmd->add_option("--port", server.port, "0 picks a free port");
  server_cmd->add_option("--per-message-cost-us", server.cost_us)
      ->check(CLI::NonNegativeNumber);
  server_cmd->add_option("--sr-per-message-cost-us", server.sr_cost_us,
                         "defaults to a tenth of --per-message-cost-us");
  server_cmd->add_option("--workers", server.workers)
      ->check(CLI::PositiveNumber);
  server_cmd->add_option("--duration-s", server.duration_s,
                         "0 runs until SIGINT or SIGTERM");
  server_cmd->add_option("--trace", server.trace,
                         "write the lock manager's trace on exit");

  BenchArgs bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Run a workload");
  bench_cmd->add_option("--design", bench.design)
      ->check(CLI::IsMember(designs));
  bench_cmd->add_option("--transport", bench.transport)
      ->check(CLI::IsMember({"inproc", "tcp"}));
  bench_cmd->add_option("--clients", bench.clients)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--items", bench.items)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--ops", bench.ops, "acquire/release pairs per client");
  bench_cmd->add_option("--shared-fraction", bench.shared_fraction)
      ->check(CLI::Range(0.0, 1.0));
  bench_cmd->add_option("--backoff-us", bench.backoff_us)
      ->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--max-retries", bench.max_retries);
  bench_cmd->add_option("--per-message-cost-us", bench.cost_us)
      ->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--sr-per-message-cost-us", bench.sr_cost_us)
      ->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--workers", bench.workers)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--verb-latency-us", bench.verb_latency_us)
      ->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--seed", bench.seed);
  bench_cmd->add_option("--client-processes", bench.client_processes,
                        "tcp transport: processes to spread clients over "
                        "(0: one per client)");
  bench_cmd->add_option("--csv", bench.csv, "default: stdout");
  bench_cmd->add_option("--trace", bench.trace);
  bench_cmd->add_option("--connect", bench.connect,
                        "host:port of a running `dlmbench server`");
  auto* sweep_clients =
      bench_cmd->add_option("--sweep-clients", bench.sweep_clients)
          ->delimiter(',');
  bench_cmd->add_option("--sweep-items", bench.sweep_items)
      ->delimiter(',')
      ->excludes(sweep_clients);

  std::string check_trace;
  std::string check_design;
  CLI::App* check_cmd = app.add_subcommand("check", "Validate a trace file");
  check_cmd->add_option("--trace", check_trace)->required();
  check_cmd->add_option("--design", check_design,
                        "enables the FIFO check for server designs")
      ->check(CLI::IsMember(designs));

  CLI11_PARSE(app, argc, argv);

  if (server_cmd->parsed()) return RunServer(server);
  if (bench_cmd->parsed()) return RunBench(bench);
  return RunCheck(check_trace, check_design);
}
