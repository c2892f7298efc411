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

#ifndef DLM_COMMON_ENDIAN_H_
#define DLM_COMMON_ENDIAN_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <type_traits>
#include <vector>

namespace dlm {

// All wire formats and lock-word byte layouts are little-endian regardless of
// the host byte order.
template <typename T>
  requires std::is_unsigned_v<T>
constexpr void StoreLittleEndian(uint8_t* dst, T value) {
  for (size_t i = 0; i < sizeof(T); ++i) {
    dst[i] = static_cast<uint8_t>(value >> (8 * i));
  }
}

template <typename T>
  requires std::is_unsigned_v<T>
constexpr T LoadLittleEndian(const uint8_t* src) {
  T value = 0;
  for (size_t i = 0; i < sizeof(T); ++i) {
    value |= static_cast<T>(src[i]) << (8 * i);
  }
  return value;
}

class ByteWriter {
 public:
  explicit ByteWriter(std::vector<uint8_t>& out) : out_(out) {}

  template <typename T>
    requires std::is_unsigned_v<T>
  ByteWriter& Put(T value) {
    size_t at = out_.size();
    out_.resize(at + sizeof(T));
    StoreLittleEndian(out_.data() + at, value);
    return *this;
  }

  ByteWriter& PutBytes(std::span<const uint8_t> bytes) {
    out_.insert(out_.end(), bytes.begin(), bytes.end());
    return *this;
  }

 private:
  std::vector<uint8_t>& out_;
};

// Sequential little-endian reader over a fixed buffer. Callers check
// remaining() before reading; reads past the end are a programming error.
class ByteReader {
 public:
  explicit ByteReader(std::span<const uint8_t> in) : in_(in) {}

  size_t remaining() const { return in_.size() - pos_; }

  template <typename T>
    requires std::is_unsigned_v<T>
  T Get() {
    T value = LoadLittleEndian<T>(in_.data() + pos_);
    pos_ += sizeof(T);
    return value;
  }

  std::span<const uint8_t> GetBytes(size_t n) {
    auto out = in_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

 private:
  std::span<const uint8_t> in_;
  size_t pos_ = 0;
};

}  // namespace dlm

#endif  // DLM_COMMON_ENDIAN_H_
