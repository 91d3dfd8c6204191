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

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "metalake/model.hpp"

namespace metalake {

enum class CompareOp { kEq, kNe, kLt, kLe, kGt, kGe, kContains };

std::string_view to_string(CompareOp op);

using FilterLiteral = std::variant<std::string, std::int64_t>;

// Boolean expression over record fields:
//
//   expr  := or
//   or    := and ("OR" and)*
//   and   := unary ("AND" unary)*
//   unary := "NOT" unary | "(" expr ")" | cmp
//   cmp   := fieldpath op literal
//   op    := "=" | "!=" | "<" | "<=" | ">" | ">=" | "~"
//
// Field paths name the flattened record schema (descriptive.title,
// technical.size, social.viewCount, ...). List fields match when any element
// matches; a comparison against an absent field is false. `~` is a
// case-insensitive substring test on text fields.
class FilterExpr {
 public:
  // Throws ParseError (with byte offset) on syntax errors and
  // Error(kInvalidInput) on unknown field paths or type mismatches.
  static FilterExpr parse(std::string_view text);

  bool matches(const MetadataRecord& record) const;
  const std::string& text() const noexcept { return text_; }

  struct Node;

 private:
  FilterExpr(std::string text, std::shared_ptr<const Node> root)
      : text_(std::move(text)), root_(std::move(root)) {}

  std::string text_;
  std::shared_ptr<const Node> root_;
};

// Every field path accepted by FilterExpr, sorted.
std::vector<std::string> filter_field_paths();

}  // namespace metalake
