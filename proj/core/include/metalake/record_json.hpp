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

#include <nlohmann/json.hpp>

#include "metalake/model.hpp"
#include "metalake/parsers.hpp"

namespace metalake {

// Wire form of the record blocks: camelCase keys, absent optionals omitted,
// enums by vocabulary name, timestamps as ISO 8601 UTC.
nlohmann::json to_json(const DescriptiveBlock& block);
nlohmann::json to_json(const TechnicalBlock& block);
nlohmann::json to_json(const MetadataRecord& record);
nlohmann::json to_json(const Identifier& identifier);
nlohmann::json to_json(const EmbeddedRelation& relation);
nlohmann::json to_json(const ParsedFields& fields);

// Throw Error(kInvalidInput) on shape or vocabulary errors.
DescriptiveBlock descriptive_from_json(const nlohmann::json& j);
TechnicalBlock technical_from_json(const nlohmann::json& j);
MetadataRecord record_from_json(const nlohmann::json& j);
Identifier identifier_from_json(const nlohmann::json& j);
EmbeddedRelation relation_from_json(const nlohmann::json& j);
ParsedFields parsed_fields_from_json(const nlohmann::json& j);

}  // namespace metalake
