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

#include "dlm/verbs/inproc.h"

#include <utility>

#include "dlm/common/clock.h"

namespace dlm::verbs {

InProcLink::InProcLink(std::shared_ptr<Node> peer_node,
                       std::weak_ptr<QueuePair> peer_qp, LinkOptions options)
    : peer_node_(std::move(peer_node)),
      peer_qp_(std::move(peer_qp)),
      options_(options) {}

VerbReply InProcLink::Transmit(const VerbRequest& request) {
  Delay(options_.one_way_latency);
  std::shared_ptr<QueuePair> target = peer_qp_.lock();
  VerbReply reply = peer_node_->Execute(request, target.get());
  Delay(options_.one_way_latency);
  return reply;
}

absl::StatusOr<Connection> ConnectInProc(const std::shared_ptr<Node>& local,
                                         const std::shared_ptr<Node>& remote,
                                         LinkOptions options) {
  absl::StatusOr<uint32_t> peer_id = remote->AssignPeerId();
  if (!peer_id.ok()) return peer_id.status();
  std::shared_ptr<QueuePair> near = local->NewQueuePair();
  std::shared_ptr<QueuePair> far = remote->NewQueuePair();
  near->AttachLink(std::make_unique<InProcLink>(remote, far, options));
  far->AttachLink(std::make_unique<InProcLink>(local, near, options));
  remote->Enqueue(far, *peer_id);
  Connection conn{std::move(near), remote->exported()};
  conn.info.peer_id = *peer_id;
  return conn;
}

InProcConnector::InProcConnector(std::shared_ptr<Node> host,
                                 LinkOptions options)
    : host_(std::move(host)),
      local_(std::make_shared<Node>()),
      options_(options) {}

absl::StatusOr<Connection> InProcConnector::Connect() {
  return ConnectInProc(local_, host_, options_);
}

}  // namespace dlm::verbs
