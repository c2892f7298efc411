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

#ifndef DLM_VERBS_QUEUE_PAIR_H_
#define DLM_VERBS_QUEUE_PAIR_H_

#include <array>
#include <atomic>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <span>

#include "dlm/verbs/completion_queue.h"
#include "dlm/verbs/types.h"

namespace dlm::verbs {

// Carries a verb to the passive side and returns its outcome. One
// implementation per transport.
class Link {
 public:
  virtual ~Link() = default;
  virtual VerbReply Transmit(const VerbRequest& request) = 0;
};

// One end of an emulated RDMA connection. Posting executes the verb through
// the attached Link and pushes its completion on send_cq() before returning,
// so completions come out in posting order. RECV completions land on
// recv_cq() when the peer's SEND is delivered.
//
// A queue pair has a single posting actor at a time; the receive queue and
// both CQs tolerate the passive side touching them concurrently.
class QueuePair {
 public:
  explicit QueuePair(uint32_t qp_id);
  ~QueuePair();

  QueuePair(const QueuePair&) = delete;
  QueuePair& operator=(const QueuePair&) = delete;

  uint32_t id() const { return id_; }

  void AttachLink(std::unique_ptr<Link> link);
  std::unique_ptr<Link> TakeLink();

  void PostRead(uint64_t wr_id, RemoteAddress addr, uint32_t length);
  void PostWrite(uint64_t wr_id, RemoteAddress addr,
                 std::span<const uint8_t> payload);
  void PostCompareSwap(uint64_t wr_id, RemoteAddress addr, uint64_t expected,
                       uint64_t swap);
  void PostFetchAdd(uint64_t wr_id, RemoteAddress addr, uint64_t addend);
  void PostSend(uint64_t wr_id, std::span<const uint8_t> payload);
  void PostRecv(uint64_t wr_id, uint32_t capacity);

  // Post, then poll send_cq() for the completion.
  Completion Read(RemoteAddress addr, uint32_t length);
  Completion Write(RemoteAddress addr, std::span<const uint8_t> payload);
  Completion CompareSwap(RemoteAddress addr, uint64_t expected, uint64_t swap);
  Completion FetchAdd(RemoteAddress addr, uint64_t addend);
  Completion Send(std::span<const uint8_t> payload);

  CompletionQueue& send_cq() { return send_cq_; }
  CompletionQueue& recv_cq() { return recv_cq_; }

  // Passive side: a SEND from the peer arrived. Consumes the oldest posted
  // RECEIVE; the sender sees the returned status.
  WcStatus DeliverSend(std::span<const uint8_t> payload);

  size_t posted_receives() const;
  uint64_t posted_count(Opcode op) const;

  // Closes both CQs and drops the link; later posts fail with
  // kTransportError.
  void Close();

 private:
  void Execute(uint64_t wr_id, const VerbRequest& request);
  Completion PostAndWait(const VerbRequest& request);

  struct PostedRecv {
    uint64_t wr_id;
    uint32_t capacity;
  };

  const uint32_t id_;
  std::mutex link_mu_;
  std::unique_ptr<Link> link_;
  CompletionQueue send_cq_;
  CompletionQueue recv_cq_;
  mutable std::mutex recv_mu_;
  std::deque<PostedRecv> receive_queue_;
  std::array<std::atomic<uint64_t>, 7> posted_{};
  uint64_t next_wr_id_ = 1;
};

}  // namespace dlm::verbs

#endif  // DLM_VERBS_QUEUE_PAIR_H_
