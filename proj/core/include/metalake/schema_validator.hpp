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

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace metalake {

struct SchemaViolation {
  std::string instance_path;  // JSON pointer into the instance
  std::string message;
};

// JSON Schema (draft 2020-12) validation for the keyword subset the served
// schemas use: type, enum, const, properties, required,
// additionalProperties, items, minItems, maxItems, minLength, maxLength,
// pattern, minimum, maximum, allOf, anyOf, oneOf, not and local $ref
// ("#/$defs/..."). Unknown keywords are ignored.
std::vector<SchemaViolation> validate_json(const nlohmann::json& schema,
                                           const nlohmann::json& instance);

}  // namespace metalake
