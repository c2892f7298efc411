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

#ifndef DLM_VERBS_CONNECTOR_H_
#define DLM_VERBS_CONNECTOR_H_

#include <chrono>

#include "absl/status/statusor.h"
#include "dlm/verbs/node.h"

namespace dlm::verbs {

struct LinkOptions {
  // Injected on the request path and again on the reply path of every verb.
  std::chrono::nanoseconds one_way_latency{0};
};

// Client-side connection factory; the lock-manager code is written against
// this and runs unchanged on either transport.
class Connector {
 public:
  virtual ~Connector() = default;
  virtual absl::StatusOr<Connection> Connect() = 0;
};

}  // namespace dlm::verbs

#endif  // DLM_VERBS_CONNECTOR_H_
