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

#include "metalake/filter_expr.hpp"

#include <cctype>
#include <charconv>
#include <functional>
#include <map>
#include <optional>

#include "metalake/error.hpp"
#include "metalake/text.hpp"

namespace metalake {

namespace {

enum class ValueKind { kText, kInteger, kNumber };

using FieldValue = std::variant<std::string, std::int64_t, double>;
using Extractor = std::function<void(const MetadataRecord&, std::vector<FieldValue>&)>;

struct FieldDef {
  ValueKind kind;
  Extractor extract;
};

void push(std::vector<FieldValue>& out, const std::optional<std::string>& v) {
  if (v) out.emplace_back(*v);
}

const std::map<std::string, FieldDef, std::less<>>& field_table() {
  using R = const MetadataRecord&;
  using V = std::vector<FieldValue>&;
  static const std::map<std::string, FieldDef, std::less<>> table = [] {
    std::map<std::string, FieldDef, std::less<>> t;
    auto text = [&](std::string path, Extractor e) {
      t.emplace(std::move(path), FieldDef{ValueKind::kText, std::move(e)});
    };
    auto creator_names = [](R r, V out) {
      for (const auto& c : r.descriptive.creators) out.emplace_back(c.name);
    };
    auto identifier_values = [](R r, V out) {
      for (const auto& i : r.descriptive.identifiers) out.emplace_back(i.value);
    };
    text("descriptive.title", [](R r, V out) { out.emplace_back(r.descriptive.title); });
    text("descriptive.creators", creator_names);
    text("descriptive.creators.name", creator_names);
    text("descriptive.creators.identifier", [](R r, V out) {
      for (const auto& c : r.descriptive.creators) push(out, c.identifier);
    });
    text("descriptive.publisher", [](R r, V out) { push(out, r.descriptive.publisher); });
    t.emplace("descriptive.publicationYear",
              FieldDef{ValueKind::kInteger, [](R r, V out) {
                         if (r.descriptive.publication_year) {
                           out.emplace_back(std::int64_t{*r.descriptive.publication_year});
                         }
                       }});
    text("descriptive.resourceType", [](R r, V out) {
      if (r.descriptive.resource_type) {
        out.emplace_back(std::string(to_string(*r.descriptive.resource_type)));
      }
    });
    text("descriptive.identifiers", identifier_values);
    text("descriptive.identifiers.value", identifier_values);
    text("descriptive.identifiers.scheme", [](R r, V out) {
      for (const auto& i : r.descriptive.identifiers) {
        out.emplace_back(std::string(to_string(i.scheme)));
      }
    });
    text("descriptive.description", [](R r, V out) { push(out, r.descriptive.description); });
    text("descriptive.subjects", [](R r, V out) {
      for (const auto& s : r.descriptive.subjects) out.emplace_back(s);
    });
    text("descriptive.language", [](R r, V out) { push(out, r.descriptive.language); });
    text("descriptive.rights", [](R r, V out) { push(out, r.descriptive.rights); });
    text("descriptive.license", [](R r, V out) { push(out, r.descriptive.license); });
    text("technical.location", [](R r, V out) { push(out, r.technical.location); });
    text("technical.format", [](R r, V out) { push(out, r.technical.format); });
    t.emplace("technical.size", FieldDef{ValueKind::kInteger, [](R r, V out) {
                                           if (r.technical.size) out.emplace_back(*r.technical.size);
                                         }});
    text("technical.checksum.algorithm", [](R r, V out) {
      if (r.technical.checksum) out.emplace_back(r.technical.checksum->algorithm);
    });
    text("technical.checksum.digest", [](R r, V out) {
      if (r.technical.checksum) out.emplace_back(r.technical.checksum->digest);
    });
    text("processual.recordId", [](R r, V out) { out.emplace_back(r.processual.record_id.str()); });
    text("processual.source", [](R r, V out) { out.emplace_back(r.processual.source); });
    text("processual.originalIdentifier",
         [](R r, V out) { out.emplace_back(r.processual.original_identifier); });
    text("processual.createdAt",
         [](R r, V out) { out.emplace_back(format_timestamp(r.processual.created_at)); });
    text("processual.modifiedAt",
         [](R r, V out) { out.emplace_back(format_timestamp(r.processual.modified_at)); });
    text("processual.dataSteward", [](R r, V out) { out.emplace_back(r.processual.data_steward); });
    text("processual.ingestFormat", [](R r, V out) {
      out.emplace_back(std::string(to_string(r.processual.ingest_format)));
    });
    text("social.keywords", [](R r, V out) {
      for (const auto& k : r.social.keywords) out.emplace_back(k);
    });
    t.emplace("social.viewCount", FieldDef{ValueKind::kInteger, [](R r, V out) {
                                             out.emplace_back(
                                                 static_cast<std::int64_t>(r.social.view_count));
                                           }});
    t.emplace("social.qualityScore", FieldDef{ValueKind::kNumber, [](R r, V out) {
                                                out.emplace_back(r.social.quality_score);
                                              }});
    text("raw.payload", [](R r, V out) { out.emplace_back(r.raw.payload); });
    text("raw.encoding", [](R, V out) { out.emplace_back(std::string("XML")); });
    text("raw.mediaType", [](R r, V out) { out.emplace_back(r.raw.media_type); });
    return t;
  }();
  return table;
}

enum class TokenKind { kIdent, kString, kInteger, kOp, kLParen, kRParen, kAnd, kOr, kNot, kEnd };

struct Token {
  TokenKind kind;
  std::string text;
  std::size_t offset;
};

[[noreturn]] void syntax_error(const std::string& message, std::size_t offset) {
  throw ParseError("filter expression: " + message, 1, offset + 1, offset);
}

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  auto is_ident_start = [](char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  };
  auto is_ident_char = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  };
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (c == '(') {
      tokens.push_back({TokenKind::kLParen, "(", start});
      ++i;
    } else if (c == ')') {
      tokens.push_back({TokenKind::kRParen, ")", start});
      ++i;
    } else if (c == '"') {
      std::string value;
      ++i;
      bool closed = false;
      while (i < s.size()) {
        if (s[i] == '\\' && i + 1 < s.size() && (s[i + 1] == '"' || s[i + 1] == '\\')) {
          value.push_back(s[i + 1]);
          i += 2;
        } else if (s[i] == '"') {
          closed = true;
          ++i;
          break;
        } else {
          value.push_back(s[i++]);
        }
      }
      if (!closed) syntax_error("unterminated string literal", start);
      tokens.push_back({TokenKind::kString, std::move(value), start});
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '-' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
      ++i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      if (i < s.size() && (is_ident_char(s[i]) || s[i] == '.')) {
        syntax_error("malformed integer literal", start);
      }
      tokens.push_back({TokenKind::kInteger, std::string(s.substr(start, i - start)), start});
    } else if (is_ident_start(c)) {
      while (i < s.size()) {
        while (i < s.size() && is_ident_char(s[i])) ++i;
        if (i + 1 < s.size() && s[i] == '.' && is_ident_start(s[i + 1])) {
          ++i;
          continue;
        }
        break;
      }
      std::string word(s.substr(start, i - start));
      TokenKind kind = TokenKind::kIdent;
      if (word == "AND") kind = TokenKind::kAnd;
      if (word == "OR") kind = TokenKind::kOr;
      if (word == "NOT") kind = TokenKind::kNot;
      tokens.push_back({kind, std::move(word), start});
    } else if (c == '=' || c == '~') {
      tokens.push_back({TokenKind::kOp, std::string(1, c), start});
      ++i;
    } else if (c == '!' || c == '<' || c == '>') {
      if (i + 1 < s.size() && s[i + 1] == '=') {
        tokens.push_back({TokenKind::kOp, std::string(s.substr(i, 2)), start});
        i += 2;
      } else if (c == '!') {
        syntax_error("expected '!='", start);
      } else {
        tokens.push_back({TokenKind::kOp, std::string(1, c), start});
        ++i;
      }
    } else {
      syntax_error(std::string("unexpected character '") + c + "'", start);
    }
  }
  tokens.push_back({TokenKind::kEnd, "", s.size()});
  return tokens;
}

CompareOp op_from(const std::string& text) {
  if (text == "=") return CompareOp::kEq;
  if (text == "!=") return CompareOp::kNe;
  if (text == "<") return CompareOp::kLt;
  if (text == "<=") return CompareOp::kLe;
  if (text == ">") return CompareOp::kGt;
  if (text == ">=") return CompareOp::kGe;
  return CompareOp::kContains;
}

template <typename T>
bool compare(const T& lhs, CompareOp op, const T& rhs) {
  switch (op) {
    case CompareOp::kEq: return lhs == rhs;
    case CompareOp::kNe: return lhs != rhs;
    case CompareOp::kLt: return lhs < rhs;
    case CompareOp::kLe: return lhs <= rhs;
    case CompareOp::kGt: return lhs > rhs;
    case CompareOp::kGe: return lhs >= rhs;
    case CompareOp::kContains: return false;
  }
  return false;
}

}  // namespace

struct FilterExpr::Node {
  enum class Kind { kAnd, kOr, kNot, kCompare } kind;
  std::vector<std::shared_ptr<const Node>> operands;
  const FieldDef* field = nullptr;
  CompareOp op = CompareOp::kEq;
  FilterLiteral literal;
  std::string folded_literal;  // lowercase copy for '~'

  bool eval(const MetadataRecord& r) const {
    switch (kind) {
      case Kind::kAnd:
        for (const auto& o : operands) {
          if (!o->eval(r)) return false;
        }
        return true;
      case Kind::kOr:
        for (const auto& o : operands) {
          if (o->eval(r)) return true;
        }
        return false;
      case Kind::kNot:
        return !operands.front()->eval(r);
      case Kind::kCompare:
        break;
    }
    std::vector<FieldValue> values;
    field->extract(r, values);
    for (const auto& v : values) {
      if (const auto* s = std::get_if<std::string>(&v)) {
        const auto& lit = std::get<std::string>(literal);
        if (op == CompareOp::kContains) {
          if (to_lower(*s).find(folded_literal) != std::string::npos) return true;
        } else if (compare(*s, op, lit)) {
          return true;
        }
      } else if (const auto* i = std::get_if<std::int64_t>(&v)) {
        if (compare(*i, op, std::get<std::int64_t>(literal))) return true;
      } else {
        const double d = std::get<double>(v);
        if (compare(d, op, static_cast<double>(std::get<std::int64_t>(literal)))) return true;
      }
    }
    return false;
  }
};

namespace {

class ExprParser {
 public:
  explicit ExprParser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  std::shared_ptr<const FilterExpr::Node> parse() {
    if (tokens_.front().kind == TokenKind::kEnd) syntax_error("empty expression", 0);
    auto root = parse_or();
    if (peek().kind != TokenKind::kEnd) syntax_error("unexpected '" + peek().text + "'", peek().offset);
    return root;
  }

 private:
  using Node = FilterExpr::Node;

  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_++]; }

  std::shared_ptr<const Node> parse_or() {
    auto first = parse_and();
    if (peek().kind != TokenKind::kOr) return first;
    auto node = std::make_shared<Node>();
    node->kind = Node::Kind::kOr;
    node->operands.push_back(std::move(first));
    while (peek().kind == TokenKind::kOr) {
      next();
      node->operands.push_back(parse_and());
    }
    return node;
  }

  std::shared_ptr<const Node> parse_and() {
    auto first = parse_unary();
    if (peek().kind != TokenKind::kAnd) return first;
    auto node = std::make_shared<Node>();
    node->kind = Node::Kind::kAnd;
    node->operands.push_back(std::move(first));
    while (peek().kind == TokenKind::kAnd) {
      next();
      node->operands.push_back(parse_unary());
    }
    return node;
  }

  std::shared_ptr<const Node> parse_unary() {
    const Token& t = peek();
    if (t.kind == TokenKind::kNot) {
      next();
      auto node = std::make_shared<Node>();
      node->kind = Node::Kind::kNot;
      node->operands.push_back(parse_unary());
      return node;
    }
    if (t.kind == TokenKind::kLParen) {
      next();
      auto inner = parse_or();
      if (peek().kind != TokenKind::kRParen) syntax_error("expected ')'", peek().offset);
      next();
      return inner;
    }
    return parse_comparison();
  }

  std::shared_ptr<const Node> parse_comparison() {
    const Token& path = next();
    if (path.kind != TokenKind::kIdent) {
      syntax_error(path.kind == TokenKind::kEnd ? "unexpected end of expression"
                                                : "expected field path, got '" + path.text + "'",
                   path.offset);
    }
    const Token& op = next();
    if (op.kind != TokenKind::kOp) syntax_error("expected comparison operator", op.offset);
    const Token& lit = next();
    if (lit.kind != TokenKind::kString && lit.kind != TokenKind::kInteger) {
      syntax_error("expected string or integer literal", lit.offset);
    }

    const auto& table = field_table();
    auto it = table.find(path.text);
    if (it == table.end()) {
      throw Error(ErrorCode::kInvalidInput, "unknown field path '" + path.text +
                                                "' at offset " + std::to_string(path.offset));
    }
    auto node = std::make_shared<Node>();
    node->kind = Node::Kind::kCompare;
    node->field = &it->second;
    node->op = op_from(op.text);

    const bool numeric_field = it->second.kind != ValueKind::kText;
    if (numeric_field != (lit.kind == TokenKind::kInteger)) {
      throw Error(ErrorCode::kInvalidInput,
                  "field '" + path.text + "' needs a" +
                      (numeric_field ? "n integer" : " string") + " literal at offset " +
                      std::to_string(lit.offset));
    }
    if (numeric_field && node->op == CompareOp::kContains) {
      throw Error(ErrorCode::kInvalidInput, "'~' applies to text fields only, not '" +
                                                path.text + "' at offset " +
                                                std::to_string(op.offset));
    }
    if (lit.kind == TokenKind::kInteger) {
      std::int64_t v = 0;
      auto [p, ec] = std::from_chars(lit.text.data(), lit.text.data() + lit.text.size(), v);
      if (ec != std::errc{}) syntax_error("integer literal out of range", lit.offset);
      node->literal = v;
    } else {
      node->literal = lit.text;
      node->folded_literal = to_lower(lit.text);
    }
    return node;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string_view to_string(CompareOp op) {
  switch (op) {
    case CompareOp::kEq: return "=";
    case CompareOp::kNe: return "!=";
    case CompareOp::kLt: return "<";
    case CompareOp::kLe: return "<=";
    case CompareOp::kGt: return ">";
    case CompareOp::kGe: return ">=";
    case CompareOp::kContains: return "~";
  }
  return "?";
}

FilterExpr FilterExpr::parse(std::string_view text) {
  ExprParser parser(lex(text));
  return FilterExpr(std::string(text), parser.parse());
}

bool FilterExpr::matches(const MetadataRecord& record) const { return root_->eval(record); }

std::vector<std::string> filter_field_paths() {
  std::vector<std::string> out;
  for (const auto& [path, def] : field_table()) out.push_back(path);
  return out;
}

}  // namespace metalake
