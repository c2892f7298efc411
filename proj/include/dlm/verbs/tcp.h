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

#ifndef DLM_VERBS_TCP_H_
#define DLM_VERBS_TCP_H_

// TCP-emulated transport. Each queue pair uses two sockets, both opened by
// the connecting side:
//
//   forward: carries verb frames from the client to the host's emulated NIC
//   reverse: carries verb frames from the host to the client's emulated NIC
//
// Each socket is a strict request/reply channel in the frame format of
// wire.h. Connection setup (before any frame, little-endian):
//
//   forward hello  client->host  [u32 magic][u8 0][u64 0]
//   accept         host->client  [u32 peer_id][u32 region_id]
//                                [u64 region_length][u64 token]
//   reverse hello  client->host  [u32 magic][u8 1][u64 token]
//   reverse ack    host->client  [u8 1]

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dlm/common/socket.h"
#include "dlm/verbs/connector.h"
#include "dlm/verbs/node.h"
#include "dlm/verbs/queue_pair.h"

namespace dlm::verbs {

inline constexpr uint32_t kTcpHelloMagic = 0x564d4c44;  // "DLMV"

// The emulated NIC on the receiving end of one socket: reads verb frames and
// executes them with Node::Execute on its own thread.
class TcpAgent {
 public:
  TcpAgent(Fd inbound, std::shared_ptr<Node> node, std::weak_ptr<QueuePair> qp);
  ~TcpAgent();

  TcpAgent(const TcpAgent&) = delete;
  TcpAgent& operator=(const TcpAgent&) = delete;

  void Stop();

 private:
  struct State;
  std::shared_ptr<State> state_;
  std::thread thread_;
};

class TcpLink : public Link {
 public:
  TcpLink(Fd outbound, std::unique_ptr<TcpAgent> inbound, LinkOptions options);
  ~TcpLink() override;

  VerbReply Transmit(const VerbRequest& request) override;

 private:
  std::mutex mu_;
  Fd outbound_;
  std::unique_ptr<TcpAgent> inbound_;
  LinkOptions options_;
};

// Host side: accepts queue-pair connections for `node`. Bind() only opens
// the listening socket, so a caller can fork client processes before any
// thread exists; Start() begins accepting.
class TcpVerbsServer {
 public:
  explicit TcpVerbsServer(std::shared_ptr<Node> node, LinkOptions options = {});
  ~TcpVerbsServer();

  absl::Status Bind(uint16_t port);
  void Start();
  void Stop();
  uint16_t port() const { return port_; }

 private:
  void AcceptLoop();
  void Handshake(Fd socket);

  struct Pending {
    std::shared_ptr<QueuePair> qp;
    uint32_t peer_id = 0;
    std::unique_ptr<TcpAgent> forward_agent;
  };

  std::shared_ptr<Node> node_;
  LinkOptions options_;
  Fd listener_;
  uint16_t port_ = 0;
  std::thread accept_thread_;
  std::mutex mu_;
  std::map<uint64_t, Pending> pending_;
  uint64_t next_token_ = 1;
  std::atomic<bool> stopping_{false};
};

class TcpConnector : public Connector {
 public:
  TcpConnector(std::string host, uint16_t port, LinkOptions options = {});

  absl::StatusOr<Connection> Connect() override;

 private:
  std::string host_;
  uint16_t port_;
  LinkOptions options_;
  std::shared_ptr<Node> local_;
};

}  // namespace dlm::verbs

#endif  // DLM_VERBS_TCP_H_
