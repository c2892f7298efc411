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

#ifndef DLM_COMMON_CLOCK_H_
#define DLM_COMMON_CLOCK_H_

#include <chrono>
#include <cstdint>

namespace dlm {

// Nanoseconds on CLOCK_MONOTONIC. On Linux this clock is shared by every
// process on the host, so timestamps from forked client processes are
// directly comparable with the parent's.
int64_t MonotonicNanos();

// Consumes `amount` of this thread's CPU time (not wall time). Used to emulate
// per-message processing cost on a server worker.
void BurnCpu(std::chrono::nanoseconds amount);

// Waits for `amount` of wall time; no-op for zero. Used for latency injection
// and backoff.
void Delay(std::chrono::nanoseconds amount);

}  // namespace dlm

#endif  // DLM_COMMON_CLOCK_H_
