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

#include "dlm/verbs/completion_queue.h"

namespace dlm::verbs {

void CompletionQueue::Push(Completion completion) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    entries_.push_back(std::move(completion));
  }
  cv_.notify_one();
}

std::optional<Completion> CompletionQueue::Poll() {
  std::lock_guard<std::mutex> lock(mu_);
  if (entries_.empty()) return std::nullopt;
  Completion c = std::move(entries_.front());
  entries_.pop_front();
  return c;
}

std::optional<Completion> CompletionQueue::WaitPoll(
    std::chrono::nanoseconds timeout) {
  std::unique_lock<std::mutex> lock(mu_);
  auto ready = [this] { return !entries_.empty() || closed_; };
  if (timeout == std::chrono::nanoseconds::max()) {
    cv_.wait(lock, ready);
  } else if (!cv_.wait_for(lock, timeout, ready)) {
    return std::nullopt;
  }
  if (entries_.empty()) return std::nullopt;
  Completion c = std::move(entries_.front());
  entries_.pop_front();
  return c;
}

void CompletionQueue::Close() {
  {
    std::lock_guard<std::mutex> lock(mu_);
    closed_ = true;
  }
  cv_.notify_all();
}

bool CompletionQueue::closed() const {
  std::lock_guard<std::mutex> lock(mu_);
  return closed_;
}

size_t CompletionQueue::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return entries_.size();
}

}  // namespace dlm::verbs
