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

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace metalake {

enum class ErrorCode {
  kInvalidInput,
  kParse,
  kFormatMismatch,
  kValidation,
  kNotFound,
  kConflict,
  kReferentialIntegrity,
  kTransport,
  kProtocol,
  kIo,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Syntax errors carry a position: line/column for XML, a byte offset for
// filter expressions (line 1).
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column,
             std::size_t offset = 0)
      : Error(ErrorCode::kParse, message + " at line " + std::to_string(line) +
                                     ", column " + std::to_string(column)),
        line_(line),
        column_(column),
        offset_(offset) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::size_t offset_;
};

// Protocol-level failure reported by a remote endpoint, e.g. an OAI-PMH
// error code other than noRecordsMatch.
class ProtocolError : public Error {
 public:
  ProtocolError(std::string protocol_code, const std::string& message)
      : Error(ErrorCode::kProtocol, message),
        protocol_code_(std::move(protocol_code)) {}

  const std::string& protocol_code() const noexcept { return protocol_code_; }

 private:
  std::string protocol_code_;
};

class TransportError : public Error {
 public:
  TransportError(int status, const std::string& message)
      : Error(ErrorCode::kTransport, message), status_(status) {}

  // HTTP status of the last attempt, 0 when no response was received.
  int status() const noexcept { return status_; }

 private:
  int status_;
};

}  // namespace metalake
