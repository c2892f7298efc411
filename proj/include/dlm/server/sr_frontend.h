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

#ifndef DLM_SERVER_SR_FRONTEND_H_
#define DLM_SERVER_SR_FRONTEND_H_

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

#include "absl/status/status.h"
#include "dlm/common/types.h"
#include "dlm/server/frontend.h"
#include "dlm/server/lock_manager.h"
#include "dlm/verbs/node.h"

namespace dlm::server {

// Two-sided verb frontend. Every connection accepted by `node` gets a handler
// thread that keeps receives posted, decodes one message per completion and
// replies with SENDs. The client id is the peer id of the connection.
class SendRecvFrontend {
 public:
  SendRecvFrontend(LockManager& manager, std::shared_ptr<verbs::Node> node,
                   FrontendOptions options);
  ~SendRecvFrontend();

  SendRecvFrontend(const SendRecvFrontend&) = delete;
  SendRecvFrontend& operator=(const SendRecvFrontend&) = delete;

  void Start();
  // Shuts the node down and closes every accepted queue pair.
  void Stop();

 private:
  struct Peer {
    std::shared_ptr<verbs::QueuePair> qp;
    std::mutex send_mu;
  };

  void AcceptLoop();
  void Serve(uint32_t client_id, std::shared_ptr<Peer> peer);
  void Deliver(const std::vector<Reply>& replies);

  LockManager& manager_;
  std::shared_ptr<verbs::Node> node_;
  FrontendOptions options_;
  WorkerPool pool_;
  std::atomic<bool> stopping_{false};
  std::thread accept_thread_;
  std::mutex mu_;
  std::map<uint32_t, std::shared_ptr<Peer>> peers_;
  std::vector<std::thread> handlers_;
};

// SENDs until the peer has a receive posted or `attempts` run out.
verbs::Completion SendWithRetry(verbs::QueuePair& qp,
                                std::span<const uint8_t> payload,
                                int attempts = 1 << 20);

class SendRecvFrontendClient {
 public:
  // `qp` must be connected to the node a SendRecvFrontend serves.
  SendRecvFrontendClient(std::shared_ptr<verbs::QueuePair> qp,
                         uint32_t client_id)
      : qp_(std::move(qp)), client_id_(client_id) {}

  uint32_t client_id() const { return client_id_; }

  absl::Status Acquire(uint32_t item, LockMode mode);
  absl::Status Release(uint32_t item);

 private:
  absl::Status Exchange(MessageOp op, uint32_t item, MessageOp want);

  std::shared_ptr<verbs::QueuePair> qp_;
  uint32_t client_id_;
  uint64_t next_request_id_ = 1;
};

}  // namespace dlm::server

#endif  // DLM_SERVER_SR_FRONTEND_H_
