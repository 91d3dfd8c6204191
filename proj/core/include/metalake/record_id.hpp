// Copyright 2026 The metalake Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>

namespace metalake {

// XXH64 over a contiguous byte range.
std::uint64_t xxh64(std::span<const std::byte> data, std::uint64_t seed = 0);
std::uint64_t xxh64(std::string_view data, std::uint64_t seed = 0);

// RFC 4648 section 5 alphabet, no padding.
std::string base64url_encode(std::span<const std::uint8_t> bytes);
std::optional<std::string> base64url_decode(std::string_view text);

// Identifier of a metadata record: the 64-bit xxh64 digest of the record's
// canonical key, rendered as 11 base64url characters (big-endian bytes).
class RecordId {
 public:
  static constexpr std::size_t kLength = 11;

  // Empty ids only exist as default-constructed placeholders.
  RecordId() = default;

  static RecordId from_digest(std::uint64_t digest);
  // Returns nullopt unless `text` is exactly 11 base64url characters that
  // decode to 8 bytes.
  static std::optional<RecordId> parse(std::string_view text);

  const std::string& str() const noexcept { return value_; }
  bool empty() const noexcept { return value_.empty(); }
  std::uint64_t digest() const;

  friend auto operator<=>(const RecordId&, const RecordId&) = default;

 private:
  explicit RecordId(std::string value) : value_(std::move(value)) {}
  std::string value_;
};

// Separator between the source location and the record's identifier within
// that source.
inline constexpr char kKeySeparator = '\x1F';

// base64url(xxh64_be(source + U+001F + original_identifier)).
// Throws Error(kInvalidInput) when original_identifier is empty.
RecordId compute_record_id(std::string_view source,
                           std::string_view original_identifier);

}  // namespace metalake

template <>
struct std::hash<metalake::RecordId> {
  std::size_t operator()(const metalake::RecordId& id) const noexcept {
    return std::hash<std::string>{}(id.str());
  }
};
