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

#ifndef DLM_SERVER_FRONTEND_H_
#define DLM_SERVER_FRONTEND_H_

#include <chrono>
#include <memory>
#include <semaphore>

namespace dlm::server {

struct FrontendOptions {
  // CPU time burned per received message, emulating messaging overhead.
  std::chrono::nanoseconds per_message_cost{0};
  // Handlers allowed to process messages at once.
  int worker_limit = 4;
  // Connections beyond this are refused.
  int max_connections = 1024;
};

// Bounded pool of message-processing slots. Each message holds a slot while
// its cost is burned and the lock manager runs.
class WorkerPool {
 public:
  explicit WorkerPool(const FrontendOptions& options)
      : slots_(options.worker_limit < 1 ? 1 : options.worker_limit),
        cost_(options.per_message_cost) {}

  template <typename F>
  auto Process(F&& handle) {
    slots_.acquire();
    struct Release {
      std::counting_semaphore<>& s;
      ~Release() { s.release(); }
    } release{slots_};
    Burn();
    return handle();
  }

 private:
  void Burn() const;

  std::counting_semaphore<> slots_;
  std::chrono::nanoseconds cost_;
};

}  // namespace dlm::server

#endif  // DLM_SERVER_FRONTEND_H_
