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

#include "dlm/checker/trace.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "dlm/common/clock.h"

namespace dlm::checker {
namespace {

const char* OpName(TraceOp op) {
  return op == TraceOp::kAcquire ? "ACQ" : "REL";
}

const char* OutcomeName(Outcome outcome) {
  switch (outcome) {
    case Outcome::kRequest:
      return "REQ";
    case Outcome::kGrant:
      return "GRANT";
    case Outcome::kAck:
      return "ACK";
    case Outcome::kTimeout:
      return "TIMEOUT";
  }
  return "?";
}

template <typename T>
bool ParseNumber(std::string_view text, T* out) {
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), *out);
  return ec == std::errc() && ptr == text.data() + text.size() && !text.empty();
}

}  // namespace

std::string FormatEvent(const TraceEvent& e) {
  return absl::StrCat(e.timestamp_ns, ",", e.client_id, ",", e.item_id, ",",
                      OpName(e.op), ",", LockModeName(e.mode), ",",
                      OutcomeName(e.outcome));
}

absl::StatusOr<TraceEvent> ParseEvent(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string> fields =
      absl::StrSplit(absl::string_view(line.data(), line.size()), ',');
  if (fields.size() != 6) {
    return absl::InvalidArgumentError(
        absl::StrCat("expected 6 fields, got ", fields.size()));
  }
  TraceEvent e;
  if (!ParseNumber(fields[0], &e.timestamp_ns)) {
    return absl::InvalidArgumentError(
        absl::StrCat("bad timestamp '", fields[0], "'"));
  }
  if (!ParseNumber(fields[1], &e.client_id)) {
    return absl::InvalidArgumentError(
        absl::StrCat("bad client id '", fields[1], "'"));
  }
  if (!ParseNumber(fields[2], &e.item_id)) {
    return absl::InvalidArgumentError(
        absl::StrCat("bad item id '", fields[2], "'"));
  }
  if (fields[3] == "ACQ") {
    e.op = TraceOp::kAcquire;
  } else if (fields[3] == "REL") {
    e.op = TraceOp::kRelease;
  } else {
    return absl::InvalidArgumentError(absl::StrCat("bad op '", fields[3], "'"));
  }
  absl::StatusOr<LockMode> mode = ParseLockMode(fields[4]);
  if (!mode.ok()) return mode.status();
  e.mode = *mode;
  if (fields[5] == "REQ") {
    e.outcome = Outcome::kRequest;
  } else if (fields[5] == "GRANT") {
    e.outcome = Outcome::kGrant;
  } else if (fields[5] == "ACK") {
    e.outcome = Outcome::kAck;
  } else if (fields[5] == "TIMEOUT") {
    e.outcome = Outcome::kTimeout;
  } else {
    return absl::InvalidArgumentError(
        absl::StrCat("bad outcome '", fields[5], "'"));
  }
  return e;
}

absl::StatusOr<std::vector<TraceEvent>> ReadTrace(std::istream& in) {
  std::vector<TraceEvent> trace;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    absl::StatusOr<TraceEvent> e = ParseEvent(line);
    if (!e.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": ", e.status().message()));
    }
    trace.push_back(*e);
  }
  return trace;
}

absl::StatusOr<std::vector<TraceEvent>> ReadTraceFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  return ReadTrace(in);
}

absl::Status WriteTrace(std::ostream& out, std::span<const TraceEvent> trace) {
  for (const TraceEvent& e : trace) out << FormatEvent(e) << '\n';
  if (!out) return absl::DataLossError("trace write failed");
  return absl::OkStatus();
}

absl::Status WriteTraceFile(const std::string& path,
                            std::span<const TraceEvent> trace) {
  std::ofstream out(path);
  if (!out) return absl::PermissionDeniedError(absl::StrCat("cannot open ", path));
  return WriteTrace(out, trace);
}

void TraceSink::Record(const TraceEvent& event) {
  Shard& shard = shards_[event.client_id % kShards];
  std::lock_guard<std::mutex> lock(shard.mu);
  shard.events.push_back(event);
}

void TraceSink::Record(uint32_t client_id, uint32_t item_id, TraceOp op,
                       LockMode mode, Outcome outcome) {
  Record(TraceEvent{MonotonicNanos(), client_id, item_id, op, mode, outcome});
}

std::vector<TraceEvent> TraceSink::Snapshot() const {
  std::vector<TraceEvent> all;
  for (const Shard& shard : shards_) {
    std::lock_guard<std::mutex> lock(shard.mu);
    all.insert(all.end(), shard.events.begin(), shard.events.end());
  }
  std::stable_sort(all.begin(), all.end(),
                   [](const TraceEvent& a, const TraceEvent& b) {
                     return a.timestamp_ns < b.timestamp_ns;
                   });
  return all;
}

size_t TraceSink::size() const {
  size_t n = 0;
  for (const Shard& shard : shards_) {
    std::lock_guard<std::mutex> lock(shard.mu);
    n += shard.events.size();
  }
  return n;
}

}  // namespace dlm::checker
