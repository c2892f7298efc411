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

#ifndef DLM_COMMON_TYPES_H_
#define DLM_COMMON_TYPES_H_

#include <cstdint>
#include <string_view>

#include "absl/status/statusor.h"

namespace dlm {

enum class LockMode : uint8_t { kShared, kExclusive };

// The three lock-manager designs under comparison.
enum class Design : uint8_t { kServerTcp, kServerSendRecv, kClientCentric };

// How clients reach the host: threads in one process, or separate processes
// talking to an emulated NIC over TCP.
enum class Transport : uint8_t { kInProc, kTcp };

const char* LockModeName(LockMode mode);
const char* DesignName(Design design);
const char* TransportName(Transport transport);

absl::StatusOr<LockMode> ParseLockMode(std::string_view text);
absl::StatusOr<Design> ParseDesign(std::string_view text);
absl::StatusOr<Transport> ParseTransport(std::string_view text);

inline bool IsServerDesign(Design design) {
  return design != Design::kClientCentric;
}

}  // namespace dlm

#endif  // DLM_COMMON_TYPES_H_
