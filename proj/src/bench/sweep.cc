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

#include "dlm/bench/sweep.h"

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace dlm::bench {
namespace {

std::string ConfigColumns(const WorkloadSpec& spec) {
  absl::StatusOr<double> cr = ContentionRate(spec.n_items, spec.n_clients);
  return absl::StrCat(DesignName(spec.design), ",",
                      TransportName(spec.transport), ",", spec.n_clients, ",",
                      spec.n_items, ",",
                      cr.ok() ? absl::StrFormat("%.6g", *cr) : "", ",",
                      absl::StrFormat("%.6g", spec.shared_fraction));
}

}  // namespace

std::vector<SweepPoint> SweepClients(const WorkloadSpec& base,
                                     std::span<const uint32_t> client_counts) {
  std::vector<SweepPoint> points;
  for (uint32_t n : client_counts) {
    WorkloadSpec spec = base;
    spec.n_clients = n;
    points.push_back(SweepPoint{spec, RunWorkload(spec)});
  }
  return points;
}

std::vector<SweepPoint> SweepContention(const WorkloadSpec& base,
                                        std::span<const uint32_t> item_counts) {
  std::vector<SweepPoint> points;
  for (uint32_t n : item_counts) {
    WorkloadSpec spec = base;
    spec.n_items = n;
    points.push_back(SweepPoint{spec, RunWorkload(spec)});
  }
  return points;
}

std::string CsvHeader() {
  return "design,transport,n_clients,n_items,contention_rate,shared_fraction,"
         "total_locks,elapsed_s,throughput_lps,seed";
}

std::string FormatCsvRow(const WorkloadSpec& spec, const RunResult& result) {
  return absl::StrCat(ConfigColumns(spec), ",", result.total_locks_granted,
                      ",", absl::StrFormat("%.6f", result.elapsed_s), ",",
                      absl::StrFormat("%.1f", result.throughput_lps), ",",
                      spec.rng_seed);
}

std::string FormatCsvRow(const SweepPoint& point) {
  if (point.ok()) return FormatCsvRow(point.spec, *point.result);
  return absl::StrCat(ConfigColumns(point.spec), ",,,FAILED,",
                      point.spec.rng_seed);
}

}  // namespace dlm::bench
