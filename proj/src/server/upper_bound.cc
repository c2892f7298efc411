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

#include "dlm/server/upper_bound.h"

#include "absl/status/status.h"

namespace dlm::server {

absl::StatusOr<double> UpperBoundThroughput(double cores, double frequency,
                                            double cycles_per_message,
                                            double messages_per_lock) {
  if (!(cores > 0) || !(frequency > 0) || !(cycles_per_message > 0) ||
      !(messages_per_lock > 0)) {
    return absl::InvalidArgumentError("all inputs must be positive");
  }
  return cores * frequency / (cycles_per_message * messages_per_lock);
}

}  // namespace dlm::server
