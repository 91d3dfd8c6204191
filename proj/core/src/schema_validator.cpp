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

#include "metalake/schema_validator.hpp"

#include <regex>

#include "metalake/error.hpp"

namespace metalake {

using nlohmann::json;

namespace {

std::size_t utf8_length(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char c : s) n += (c & 0xC0) != 0x80;
  return n;
}

bool has_type(const json& v, const std::string& type) {
  if (type == "object") return v.is_object();
  if (type == "array") return v.is_array();
  if (type == "string") return v.is_string();
  if (type == "integer") {
    return v.is_number_integer() ||
           (v.is_number_float() && v.get<double>() == static_cast<double>(static_cast<long long>(v.get<double>())));
  }
  if (type == "number") return v.is_number();
  if (type == "boolean") return v.is_boolean();
  if (type == "null") return v.is_null();
  return false;
}

std::string escape_pointer(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out.push_back(c);
    }
  }
  return out;
}

class Validator {
 public:
  explicit Validator(const json& root) : root_(root) {}

  void check(const json& schema, const json& v, const std::string& path,
             std::vector<SchemaViolation>& out, int depth = 0) const {
    if (depth > 64) throw Error(ErrorCode::kInvalidInput, "schema $ref nesting too deep");
    if (schema.is_boolean()) {
      if (!schema.get<bool>()) out.push_back({path, "no value allowed"});
      return;
    }
    if (!schema.is_object()) return;

    if (auto it = schema.find("$ref"); it != schema.end()) {
      check(resolve(it->get<std::string>()), v, path, out, depth + 1);
    }
    if (auto it = schema.find("type"); it != schema.end()) {
      bool ok = false;
      if (it->is_string()) {
        ok = has_type(v, it->get<std::string>());
      } else {
        for (const auto& t : *it) ok = ok || has_type(v, t.get<std::string>());
      }
      if (!ok) {
        out.push_back({path, "expected type " + it->dump()});
        return;
      }
    }
    if (auto it = schema.find("const"); it != schema.end() && *it != v) {
      out.push_back({path, "must equal " + it->dump()});
    }
    if (auto it = schema.find("enum"); it != schema.end()) {
      bool found = false;
      for (const auto& e : *it) found = found || e == v;
      if (!found) out.push_back({path, "must be one of " + it->dump()});
    }

    if (v.is_object()) check_object(schema, v, path, out, depth);
    if (v.is_array()) check_array(schema, v, path, out, depth);
    if (v.is_string()) check_string(schema, v.get<std::string>(), path, out);
    if (v.is_number()) {
      const double x = v.get<double>();
      if (auto it = schema.find("minimum"); it != schema.end() && x < it->get<double>()) {
        out.push_back({path, "must be >= " + it->dump()});
      }
      if (auto it = schema.find("maximum"); it != schema.end() && x > it->get<double>()) {
        out.push_back({path, "must be <= " + it->dump()});
      }
    }

    if (auto it = schema.find("allOf"); it != schema.end()) {
      for (const auto& sub : *it) check(sub, v, path, out, depth + 1);
    }
    if (auto it = schema.find("anyOf"); it != schema.end()) {
      bool any = false;
      for (const auto& sub : *it) any = any || passes(sub, v, path, depth);
      if (!any) out.push_back({path, "matches none of anyOf"});
    }
    if (auto it = schema.find("oneOf"); it != schema.end()) {
      int matches = 0;
      for (const auto& sub : *it) matches += passes(sub, v, path, depth) ? 1 : 0;
      if (matches != 1) {
        out.push_back({path, "matches " + std::to_string(matches) + " of oneOf, expected 1"});
      }
    }
    if (auto it = schema.find("not"); it != schema.end() && passes(*it, v, path, depth)) {
      out.push_back({path, "must not match the 'not' schema"});
    }
  }

 private:
  bool passes(const json& schema, const json& v, const std::string& path, int depth) const {
    std::vector<SchemaViolation> scratch;
    check(schema, v, path, scratch, depth + 1);
    return scratch.empty();
  }

  const json& resolve(const std::string& ref) const {
    if (ref == "#") return root_;
    if (ref.rfind("#/", 0) != 0) {
      throw Error(ErrorCode::kInvalidInput, "unsupported $ref '" + ref + "'");
    }
    try {
      return root_.at(json::json_pointer(ref.substr(1)));
    } catch (const json::exception&) {
      throw Error(ErrorCode::kInvalidInput, "unresolvable $ref '" + ref + "'");
    }
  }

  void check_object(const json& schema, const json& v, const std::string& path,
                    std::vector<SchemaViolation>& out, int depth) const {
    if (auto it = schema.find("required"); it != schema.end()) {
      for (const auto& key : *it) {
        if (!v.contains(key.get<std::string>())) {
          out.push_back({path, "missing required property '" + key.get<std::string>() + "'"});
        }
      }
    }
    const json* properties = nullptr;
    if (auto it = schema.find("properties"); it != schema.end()) properties = &*it;
    const auto additional = schema.find("additionalProperties");
    for (const auto& [key, value] : v.items()) {
      const std::string child = path + "/" + escape_pointer(key);
      if (properties != nullptr && properties->contains(key)) {
        check(properties->at(key), value, child, out, depth + 1);
      } else if (additional != schema.end()) {
        if (additional->is_boolean() && !additional->get<bool>()) {
          out.push_back({child, "additional property not allowed"});
        } else {
          check(*additional, value, child, out, depth + 1);
        }
      }
    }
  }

  void check_array(const json& schema, const json& v, const std::string& path,
                   std::vector<SchemaViolation>& out, int depth) const {
    if (auto it = schema.find("minItems"); it != schema.end() && v.size() < it->get<std::size_t>()) {
      out.push_back({path, "needs at least " + it->dump() + " items"});
    }
    if (auto it = schema.find("maxItems"); it != schema.end() && v.size() > it->get<std::size_t>()) {
      out.push_back({path, "allows at most " + it->dump() + " items"});
    }
    if (auto it = schema.find("items"); it != schema.end()) {
      for (std::size_t i = 0; i < v.size(); ++i) {
        check(*it, v[i], path + "/" + std::to_string(i), out, depth + 1);
      }
    }
  }

  void check_string(const json& schema, const std::string& s, const std::string& path,
                    std::vector<SchemaViolation>& out) const {
    const std::size_t n = utf8_length(s);
    if (auto it = schema.find("minLength"); it != schema.end() && n < it->get<std::size_t>()) {
      out.push_back({path, "shorter than " + it->dump()});
    }
    if (auto it = schema.find("maxLength"); it != schema.end() && n > it->get<std::size_t>()) {
      out.push_back({path, "longer than " + it->dump()});
    }
    if (auto it = schema.find("pattern"); it != schema.end()) {
      const std::regex re(it->get<std::string>(), std::regex::ECMAScript);
      if (!std::regex_search(s, re)) out.push_back({path, "does not match " + it->dump()});
    }
  }

  const json& root_;
};

}  // namespace

std::vector<SchemaViolation> validate_json(const json& schema, const json& instance) {
  std::vector<SchemaViolation> out;
  Validator(schema).check(schema, instance, "", out);
  return out;
}

}  // namespace metalake
