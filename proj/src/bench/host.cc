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

#include "dlm/bench/host.h"

#include <utility>

#include "absl/strings/str_cat.h"
#include "dlm/locktable/lock_table.h"
#include "dlm/server/lock_manager.h"
#include "dlm/server/sr_frontend.h"
#include "dlm/server/tcp_frontend.h"
#include "dlm/verbs/inproc.h"
#include "dlm/verbs/node.h"
#include "dlm/verbs/tcp.h"

namespace dlm::bench {
namespace {

using checker::Outcome;
using checker::TraceOp;

class ClientCentricClient : public LockClient {
 public:
  explicit ClientCentricClient(client::ClientSession session)
      : session_(std::move(session)) {}

  uint32_t client_id() const override { return session_.client_id(); }

  absl::Status Acquire(uint32_t item, LockMode mode) override {
    return session_.Acquire(item, mode).status();
  }

  absl::Status Release(uint32_t item, LockMode mode) override {
    return session_.Release(client::HeldLock{item, mode});
  }

 private:
  client::ClientSession session_;
};

// Adapts TcpFrontendClient / SendRecvFrontendClient, optionally recording
// the client's side of each exchange.
template <typename Stub>
class ServerClient : public LockClient {
 public:
  ServerClient(std::unique_ptr<Stub> stub, checker::TraceSink* sink)
      : stub_(std::move(stub)), sink_(sink) {}

  uint32_t client_id() const override { return stub_->client_id(); }

  absl::Status Acquire(uint32_t item, LockMode mode) override {
    Trace(item, TraceOp::kAcquire, mode, Outcome::kRequest);
    absl::Status s = stub_->Acquire(item, mode);
    if (s.ok()) Trace(item, TraceOp::kAcquire, mode, Outcome::kGrant);
    return s;
  }

  absl::Status Release(uint32_t item, LockMode mode) override {
    Trace(item, TraceOp::kRelease, mode, Outcome::kRequest);
    absl::Status s = stub_->Release(item);
    if (s.ok()) Trace(item, TraceOp::kRelease, mode, Outcome::kAck);
    return s;
  }

 private:
  void Trace(uint32_t item, TraceOp op, LockMode mode, Outcome outcome) {
    if (sink_ != nullptr) {
      sink_->Record(stub_->client_id(), item, op, mode, outcome);
    }
  }

  std::unique_ptr<Stub> stub_;
  checker::TraceSink* sink_;
};

absl::StatusOr<std::unique_ptr<LockClient>> MakeClientCentric(
    const verbs::Connection& conn, const client::SessionOptions& session,
    checker::TraceSink* sink) {
  absl::StatusOr<locktable::LockTable> table =
      locktable::LockTable::Attach(conn.info.region_id,
                                   conn.info.region_length);
  if (!table.ok()) return table.status();
  absl::StatusOr<client::ClientSession> s = client::ClientSession::Create(
      conn.qp, conn.info.peer_id, *std::move(table), session, sink);
  if (!s.ok()) return s.status();
  return std::make_unique<ClientCentricClient>(*std::move(s));
}

absl::StatusOr<std::unique_ptr<LockClient>> MakeSendRecv(
    const verbs::Connection& conn, checker::TraceSink* sink) {
  if (conn.info.region_id != 0) {
    return absl::FailedPreconditionError(
        "host exports a lock table; it does not run a lock manager");
  }
  return std::make_unique<ServerClient<server::SendRecvFrontendClient>>(
      std::make_unique<server::SendRecvFrontendClient>(conn.qp,
                                                       conn.info.peer_id),
      sink);
}

absl::StatusOr<std::unique_ptr<LockClient>> MakeTcp(const std::string& host,
                                                    uint16_t port,
                                                    checker::TraceSink* sink) {
  absl::StatusOr<std::unique_ptr<server::TcpFrontendClient>> stub =
      server::TcpFrontendClient::Connect(host, port);
  if (!stub.ok()) return stub.status();
  return std::make_unique<ServerClient<server::TcpFrontendClient>>(
      *std::move(stub), sink);
}

// Verb hosts share the optional TCP verbs listener.
class VerbsHost : public LockHost {
 public:
  explicit VerbsHost(const HostOptions& options)
      : options_(options), node_(std::make_shared<verbs::Node>()) {}

  absl::Status Bind(uint16_t port) override {
    tcp_ = std::make_unique<verbs::TcpVerbsServer>(node_, options_.link);
    return tcp_->Bind(port);
  }

  uint16_t port() const override { return tcp_ ? tcp_->port() : 0; }

 protected:
  HostOptions options_;
  std::shared_ptr<verbs::Node> node_;
  std::unique_ptr<verbs::TcpVerbsServer> tcp_;
};

class ClientCentricHost : public VerbsHost {
 public:
  using VerbsHost::VerbsHost;

  absl::Status Init() {
    absl::StatusOr<locktable::LockTable> table =
        locktable::LockTable::Create(*node_, options_.n_items);
    return table.status();
  }

  void Start() override {
    if (tcp_) tcp_->Start();
  }

  void Stop() override {
    if (tcp_) tcp_->Stop();
    node_->Shutdown();
  }

  absl::StatusOr<std::unique_ptr<LockClient>> ConnectLocal(
      const client::SessionOptions& session, verbs::LinkOptions link,
      checker::TraceSink* client_sink) override {
    verbs::InProcConnector connector(node_, link);
    absl::StatusOr<verbs::Connection> conn = connector.Connect();
    if (!conn.ok()) return conn.status();
    return MakeClientCentric(*conn, session, client_sink);
  }
};

class SendRecvHost : public VerbsHost {
 public:
  SendRecvHost(const HostOptions& options, checker::TraceSink* sink)
      : VerbsHost(options),
        manager_(options.n_items, sink),
        frontend_(manager_, node_, options.frontend) {}

  ~SendRecvHost() override { Stop(); }

  void Start() override {
    frontend_.Start();
    if (tcp_) tcp_->Start();
  }

  void Stop() override {
    if (tcp_) tcp_->Stop();
    frontend_.Stop();
  }

  absl::StatusOr<std::unique_ptr<LockClient>> ConnectLocal(
      const client::SessionOptions&, verbs::LinkOptions link,
      checker::TraceSink* client_sink) override {
    verbs::InProcConnector connector(node_, link);
    absl::StatusOr<verbs::Connection> conn = connector.Connect();
    if (!conn.ok()) return conn.status();
    return MakeSendRecv(*conn, client_sink);
  }

 private:
  server::LockManager manager_;
  server::SendRecvFrontend frontend_;
};

class TcpHost : public LockHost {
 public:
  TcpHost(const HostOptions& options, checker::TraceSink* sink)
      : manager_(options.n_items, sink), frontend_(manager_, options.frontend) {}

  absl::Status Bind(uint16_t port) override {
    absl::Status s = frontend_.Bind(port);
    bound_ = s.ok();
    return s;
  }

  void Start() override {
    if (!bound_) bound_ = frontend_.Bind(0).ok();
    frontend_.Start();
  }

  void Stop() override { frontend_.Stop(); }

  uint16_t port() const override { return frontend_.port(); }

  absl::StatusOr<std::unique_ptr<LockClient>> ConnectLocal(
      const client::SessionOptions&, verbs::LinkOptions,
      checker::TraceSink* client_sink) override {
    if (!bound_) return absl::FailedPreconditionError("host is not bound");
    return MakeTcp("127.0.0.1", frontend_.port(), client_sink);
  }

 private:
  server::LockManager manager_;
  server::TcpFrontend frontend_;
  bool bound_ = false;
};

}  // namespace

absl::StatusOr<std::unique_ptr<LockHost>> LockHost::Create(
    const HostOptions& options, checker::TraceSink* sink) {
  if (options.n_items == 0) {
    return absl::InvalidArgumentError("n_items must be at least 1");
  }
  if (options.frontend.per_message_cost.count() < 0) {
    return absl::InvalidArgumentError("per_message_cost must be >= 0");
  }
  switch (options.design) {
    case Design::kClientCentric: {
      auto host = std::make_unique<ClientCentricHost>(options);
      if (absl::Status s = host->Init(); !s.ok()) return s;
      return host;
    }
    case Design::kServerSendRecv:
      return std::make_unique<SendRecvHost>(options, sink);
    case Design::kServerTcp:
      return std::make_unique<TcpHost>(options, sink);
  }
  return absl::InvalidArgumentError("unknown design");
}

absl::StatusOr<std::unique_ptr<LockClient>> ConnectRemote(
    Design design, const std::string& host, uint16_t port,
    const client::SessionOptions& session, verbs::LinkOptions link,
    checker::TraceSink* client_sink) {
  if (design == Design::kServerTcp) return MakeTcp(host, port, client_sink);
  verbs::TcpConnector connector(host, port, link);
  absl::StatusOr<verbs::Connection> conn = connector.Connect();
  if (!conn.ok()) return conn.status();
  if (design == Design::kClientCentric) {
    return MakeClientCentric(*conn, session, client_sink);
  }
  return MakeSendRecv(*conn, client_sink);
}

}  // namespace dlm::bench
