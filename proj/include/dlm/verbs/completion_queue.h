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

#ifndef DLM_VERBS_COMPLETION_QUEUE_H_
#define DLM_VERBS_COMPLETION_QUEUE_H_

#include <chrono>
#include <condition_variable>
#include <deque>
#include <mutex>
#include <optional>

#include "dlm/verbs/types.h"

namespace dlm::verbs {

// Ordered completion stream. Producers may be any thread (the passive side
// pushes RECV completions); only the owning queue pair's actor polls.
class CompletionQueue {
 public:
  void Push(Completion completion);

  std::optional<Completion> Poll();

  // Keeps polling until a completion arrives, `timeout` passes, or the queue
  // is closed.
  std::optional<Completion> WaitPoll(
      std::chrono::nanoseconds timeout = std::chrono::nanoseconds::max());

  // Wakes all waiters; later WaitPoll calls return whatever is queued, then
  // nullopt.
  void Close();
  bool closed() const;
  size_t size() const;

 private:
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::deque<Completion> entries_;
  bool closed_ = false;
};

}  // namespace dlm::verbs

#endif  // DLM_VERBS_COMPLETION_QUEUE_H_
