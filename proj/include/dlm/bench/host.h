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

#ifndef DLM_BENCH_HOST_H_
#define DLM_BENCH_HOST_H_

#include <cstdint>
#include <memory>
#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dlm/checker/trace.h"
#include "dlm/client/session.h"
#include "dlm/common/types.h"
#include "dlm/server/frontend.h"
#include "dlm/verbs/connector.h"

namespace dlm::bench {

// What the harness drives: one closed-loop lock client of any design.
class LockClient {
 public:
  virtual ~LockClient() = default;

  virtual uint32_t client_id() const = 0;
  // DeadlineExceeded means the acquire gave up (client-centric with bounded
  // retries); the lock is not held.
  virtual absl::Status Acquire(uint32_t item, LockMode mode) = 0;
  virtual absl::Status Release(uint32_t item, LockMode mode) = 0;
};

struct HostOptions {
  Design design = Design::kClientCentric;
  uint32_t n_items = 100;
  // Cost and worker settings of the active frontend. Unused by the
  // client-centric design, whose host runs no lock logic.
  server::FrontendOptions frontend;
  // Applied to verb links accepted over TCP.
  verbs::LinkOptions link;
};

// The passive side of one design: a lock table on a verbs node, or a lock
// manager behind its frontend. Server designs record their trace into the
// sink given at creation.
class LockHost {
 public:
  static absl::StatusOr<std::unique_ptr<LockHost>> Create(
      const HostOptions& options, checker::TraceSink* sink);
  virtual ~LockHost() = default;

  // Opens the TCP listener without starting any thread, so the process can
  // still fork safely. Port 0 picks an ephemeral port.
  virtual absl::Status Bind(uint16_t port) = 0;
  virtual void Start() = 0;
  virtual void Stop() = 0;
  virtual uint16_t port() const = 0;

  // A client in this process. The server-tcp design connects over loopback
  // and needs Bind() first; the others use the in-process verb transport.
  virtual absl::StatusOr<std::unique_ptr<LockClient>> ConnectLocal(
      const client::SessionOptions& session, verbs::LinkOptions link,
      checker::TraceSink* client_sink) = 0;
};

// A client of a host in another process. `client_sink` receives the
// client's own view of its lock lifecycle; for server designs those events
// are recorded around the request/reply exchange.
absl::StatusOr<std::unique_ptr<LockClient>> ConnectRemote(
    Design design, const std::string& host, uint16_t port,
    const client::SessionOptions& session, verbs::LinkOptions link,
    checker::TraceSink* client_sink);

}  // namespace dlm::bench

#endif  // DLM_BENCH_HOST_H_
