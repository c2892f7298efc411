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

#ifndef DLM_SERVER_TCP_FRONTEND_H_
#define DLM_SERVER_TCP_FRONTEND_H_

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dlm/common/socket.h"
#include "dlm/common/types.h"
#include "dlm/server/frontend.h"
#include "dlm/server/lock_manager.h"

namespace dlm::server {

// Plain TCP frontend: one thread per client connection, frames are
// [u32 length][17-byte message]. On accept the server sends an ACK whose
// client_id is the id assigned to that connection (dense, from 1); the
// server trusts only that id, not the one carried in later requests.
class TcpFrontend {
 public:
  TcpFrontend(LockManager& manager, FrontendOptions options);
  ~TcpFrontend();

  TcpFrontend(const TcpFrontend&) = delete;
  TcpFrontend& operator=(const TcpFrontend&) = delete;

  // Listens without accepting; connections queue in the backlog until
  // Start(). Port 0 picks an ephemeral port.
  absl::Status Bind(uint16_t port);
  void Start();
  void Stop();
  uint16_t port() const { return port_; }

 private:
  struct Connection {
    uint32_t client_id = 0;
    Fd fd;
    std::mutex send_mu;
  };

  void AcceptLoop();
  void Serve(std::shared_ptr<Connection> conn);
  void Deliver(const std::vector<Reply>& replies);

  LockManager& manager_;
  FrontendOptions options_;
  WorkerPool pool_;
  Fd listener_;
  uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  std::thread accept_thread_;
  std::mutex mu_;
  std::map<uint32_t, std::shared_ptr<Connection>> connections_;
  std::vector<std::thread> handlers_;
  uint32_t next_client_id_ = 1;
};

absl::Status WriteMessageFrame(const Fd& fd, const Message& message);
absl::StatusOr<Message> ReadMessageFrame(const Fd& fd);

class TcpFrontendClient {
 public:
  static absl::StatusOr<std::unique_ptr<TcpFrontendClient>> Connect(
      const std::string& host, uint16_t port);

  uint32_t client_id() const { return client_id_; }

  // Block until granted. An ERROR reply becomes FailedPrecondition.
  absl::Status Acquire(uint32_t item, LockMode mode);
  absl::Status Release(uint32_t item);

 private:
  TcpFrontendClient(Fd fd, uint32_t client_id)
      : fd_(std::move(fd)), client_id_(client_id) {}
  absl::Status Exchange(MessageOp op, uint32_t item, MessageOp want);

  Fd fd_;
  uint32_t client_id_;
  uint64_t next_request_id_ = 1;
};

}  // namespace dlm::server

#endif  // DLM_SERVER_TCP_FRONTEND_H_
