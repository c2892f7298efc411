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

#include "dlm/common/clock.h"

#include <time.h>

#include <thread>

namespace dlm {

int64_t MonotonicNanos() {
  timespec ts;
  clock_gettime(CLOCK_MONOTONIC, &ts);
  return static_cast<int64_t>(ts.tv_sec) * 1'000'000'000 + ts.tv_nsec;
}

namespace {

int64_t ThreadCpuNanos() {
  timespec ts;
  clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
  return static_cast<int64_t>(ts.tv_sec) * 1'000'000'000 + ts.tv_nsec;
}

}  // namespace

void BurnCpu(std::chrono::nanoseconds amount) {
  if (amount <= std::chrono::nanoseconds::zero()) return;
  const int64_t deadline = ThreadCpuNanos() + amount.count();
  while (ThreadCpuNanos() < deadline) {
  }
}

void Delay(std::chrono::nanoseconds amount) {
  if (amount <= std::chrono::nanoseconds::zero()) return;
  std::this_thread::sleep_for(amount);
}

}  // namespace dlm
