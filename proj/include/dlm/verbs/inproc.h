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

#ifndef DLM_VERBS_INPROC_H_
#define DLM_VERBS_INPROC_H_

#include <memory>

#include "dlm/verbs/connector.h"
#include "dlm/verbs/node.h"
#include "dlm/verbs/queue_pair.h"

namespace dlm::verbs {

// Executes verbs directly against the peer node from the posting thread.
class InProcLink : public Link {
 public:
  InProcLink(std::shared_ptr<Node> peer_node, std::weak_ptr<QueuePair> peer_qp,
             LinkOptions options);

  VerbReply Transmit(const VerbRequest& request) override;

 private:
  std::shared_ptr<Node> peer_node_;
  std::weak_ptr<QueuePair> peer_qp_;
  LinkOptions options_;
};

// Connects a fresh queue pair on `local` to a fresh one on `remote`; the
// remote end is handed to remote->Accept().
absl::StatusOr<Connection> ConnectInProc(const std::shared_ptr<Node>& local,
                                         const std::shared_ptr<Node>& remote,
                                         LinkOptions options = {});

class InProcConnector : public Connector {
 public:
  explicit InProcConnector(std::shared_ptr<Node> host,
                           LinkOptions options = {});

  absl::StatusOr<Connection> Connect() override;

 private:
  std::shared_ptr<Node> host_;
  std::shared_ptr<Node> local_;
  LinkOptions options_;
};

}  // namespace dlm::verbs

#endif  // DLM_VERBS_INPROC_H_
