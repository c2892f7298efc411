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

#include "dlm/common/types.h"

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace dlm {

const char* LockModeName(LockMode mode) {
  return mode == LockMode::kShared ? "SHARED" : "EXCLUSIVE";
}

const char* DesignName(Design design) {
  switch (design) {
    case Design::kServerTcp:
      return "server-tcp";
    case Design::kServerSendRecv:
      return "server-sr";
    case Design::kClientCentric:
      return "client-centric";
  }
  return "unknown";
}

const char* TransportName(Transport transport) {
  return transport == Transport::kInProc ? "inproc" : "tcp";
}

absl::StatusOr<LockMode> ParseLockMode(std::string_view text) {
  if (text == "SHARED" || text == "S") return LockMode::kShared;
  if (text == "EXCLUSIVE" || text == "E") return LockMode::kExclusive;
  return absl::InvalidArgumentError(absl::StrCat("unknown lock mode '", std::string(text), "'"));
}

absl::StatusOr<Design> ParseDesign(std::string_view text) {
  for (Design d : {Design::kServerTcp, Design::kServerSendRecv,
                   Design::kClientCentric}) {
    if (text == DesignName(d)) return d;
  }
  return absl::InvalidArgumentError(absl::StrCat("unknown design '", std::string(text), "'"));
}

absl::StatusOr<Transport> ParseTransport(std::string_view text) {
  if (text == "inproc") return Transport::kInProc;
  if (text == "tcp") return Transport::kTcp;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown transport '", std::string(text), "'"));
}

}  // namespace dlm
