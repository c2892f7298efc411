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

#ifndef DLM_COMMON_SOCKET_H_
#define DLM_COMMON_SOCKET_H_

#include <chrono>
#include <cstdint>
#include <span>
#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace dlm {

// Owning file descriptor.
class Fd {
 public:
  Fd() = default;
  explicit Fd(int fd) : fd_(fd) {}
  ~Fd() { Close(); }

  Fd(Fd&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }
  Fd& operator=(Fd&& other) noexcept;
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;

  int get() const { return fd_; }
  bool valid() const { return fd_ >= 0; }

  // shutdown(2) both directions; wakes any thread blocked on the socket
  // without invalidating the descriptor.
  void Shutdown() const;
  void Close();

 private:
  int fd_ = -1;
};

// Listens on 127.0.0.1-reachable INADDR_ANY:`port`; port 0 picks a free one.
absl::StatusOr<Fd> ListenTcp(uint16_t port, int backlog = 512);
absl::StatusOr<uint16_t> LocalPort(const Fd& socket);
absl::StatusOr<Fd> AcceptTcp(const Fd& listener);
absl::StatusOr<Fd> ConnectTcp(const std::string& host, uint16_t port);

// Zero clears the timeout. Reads that time out fail with Unavailable.
absl::Status SetReceiveTimeout(const Fd& fd, std::chrono::milliseconds timeout);

absl::Status WriteAll(const Fd& fd, std::span<const uint8_t> bytes);
// Fails with UnavailableError on orderly EOF.
absl::Status ReadExact(const Fd& fd, std::span<uint8_t> bytes);

// Splits "host:port".
absl::Status ParseHostPort(const std::string& text, std::string* host,
                           uint16_t* port);

}  // namespace dlm

#endif  // DLM_COMMON_SOCKET_H_
