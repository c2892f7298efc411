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

#ifndef DLM_BENCH_SWEEP_H_
#define DLM_BENCH_SWEEP_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "dlm/bench/workload.h"

namespace dlm::bench {

struct SweepPoint {
  WorkloadSpec spec;
  // An error, or a result. Results with violations count as failed rows.
  absl::StatusOr<RunResult> result;

  bool ok() const { return result.ok() && result->violations.empty(); }
};

// One run per client count, items fixed.
std::vector<SweepPoint> SweepClients(const WorkloadSpec& base,
                                     std::span<const uint32_t> client_counts);
// One run per item count, clients fixed.
std::vector<SweepPoint> SweepContention(const WorkloadSpec& base,
                                        std::span<const uint32_t> item_counts);

std::string CsvHeader();
// Failed points keep their configuration columns and report FAILED in the
// throughput column, leaving total_locks and elapsed_s empty.
std::string FormatCsvRow(const SweepPoint& point);
std::string FormatCsvRow(const WorkloadSpec& spec, const RunResult& result);

}  // namespace dlm::bench

#endif  // DLM_BENCH_SWEEP_H_
