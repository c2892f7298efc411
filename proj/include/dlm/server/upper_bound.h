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

#ifndef DLM_SERVER_UPPER_BOUND_H_
#define DLM_SERVER_UPPER_BOUND_H_

#include "absl/status/statusor.h"

namespace dlm::server {

// CPU-bound ceiling on server-centric lock throughput:
//   cores * frequency / (cycles_per_message * messages_per_lock).
// All inputs must be positive.
//
// With 40 cores at 3 GHz and 10^4 cycles per message, one message per lock
// gives 1.2e7 locks/s. Figures of about 3e7 that are sometimes quoted for the
// same inputs do not follow from this formula; they would need about 4,000
// cycles per message. The formula is kept as is.
absl::StatusOr<double> UpperBoundThroughput(double cores, double frequency,
                                            double cycles_per_message,
                                            double messages_per_lock);

}  // namespace dlm::server

#endif  // DLM_SERVER_UPPER_BOUND_H_
