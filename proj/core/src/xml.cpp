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

#include "metalake/xml.hpp"

#include <algorithm>
#include <cstdint>

#include "metalake/error.hpp"
#include "metalake/text.hpp"

namespace metalake::xml {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

bool is_name_start(unsigned char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_' ||
         c == ':' || c >= 0x80;
}

bool is_name_char(unsigned char c) {
  return is_name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
}

bool is_xml_char(std::uint32_t cp) {
  return cp == 0x9 || cp == 0xA || cp == 0xD || (cp >= 0x20 && cp <= 0xD7FF) ||
         (cp >= 0xE000 && cp <= 0xFFFD) || (cp >= 0x10000 && cp <= 0x10FFFF);
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::pair<std::string, std::string> split_qname(const std::string& qname) {
  const auto colon = qname.find(':');
  if (colon == std::string::npos) return {std::string{}, qname};
  return {qname.substr(0, colon), qname.substr(colon + 1)};
}

struct RawAttribute {
  std::string qname;
  std::string value;
  std::size_t offset;
};

class Parser {
 public:
  Parser(std::string_view text, const ParseOptions& options)
      : text_(text), options_(options) {}

  Document run() {
    if (!is_valid_utf8(text_)) fail("input is not valid UTF-8", 0);
    if (text_.starts_with("\xEF\xBB\xBF")) pos_ = 3;

    if (text_.substr(pos_).starts_with("<?xml") &&
        pos_ + 5 < text_.size() && is_space(text_[pos_ + 5])) {
      parse_xml_declaration();
    }
    skip_misc(true);
    if (eof() || peek() != '<') fail("expected root element", pos_);

    Document doc;
    std::vector<NamespaceBindings> scopes{options_.inherited};
    scopes.back().emplace("xml", std::string(kXmlNamespace));
    doc.root = parse_element(scopes, 1);

    skip_misc(false);
    if (!eof()) fail("content after root element", pos_);
    return doc;
  }

 private:
  [[noreturn]] void fail(const std::string& message, std::size_t offset) const {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t stop = std::min(offset, text_.size());
    for (std::size_t i = 0; i < stop; ++i) {
      const auto c = static_cast<unsigned char>(text_[i]);
      if (c == '\n') {
        ++line;
        column = 1;
      } else if ((c & 0xC0) != 0x80) {
        ++column;
      }
    }
    throw ParseError("XML: " + message, line, column, offset);
  }

  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  bool lookahead(std::string_view s) const { return text_.substr(pos_).starts_with(s); }

  void expect(std::string_view s) {
    if (!lookahead(s)) fail("expected '" + std::string(s) + "'", pos_);
    pos_ += s.size();
  }

  void skip_space() {
    while (!eof() && is_space(peek())) ++pos_;
  }

  std::string parse_name() {
    const std::size_t start = pos_;
    if (eof() || !is_name_start(static_cast<unsigned char>(peek()))) {
      fail("expected a name", pos_);
    }
    while (!eof() && is_name_char(static_cast<unsigned char>(peek()))) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  void parse_xml_declaration() {
    const std::size_t start = pos_;
    const auto close = text_.find("?>", pos_);
    if (close == std::string_view::npos) fail("unterminated XML declaration", start);
    const std::string_view decl = text_.substr(pos_, close - pos_);
    const auto enc = decl.find("encoding");
    if (enc != std::string_view::npos) {
      auto q = decl.find_first_of("\"'", enc);
      if (q != std::string_view::npos) {
        const auto qe = decl.find(decl[q], q + 1);
        std::string name(decl.substr(q + 1, qe - q - 1));
        std::transform(name.begin(), name.end(), name.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        if (name != "utf-8" && name != "utf8" && name != "us-ascii") {
          fail("unsupported encoding '" + name + "'", start + enc);
        }
      }
    }
    pos_ = close + 2;
  }

  void skip_comment() {
    const std::size_t start = pos_;
    pos_ += 4;
    const auto close = text_.find("-->", pos_);
    if (close == std::string_view::npos) fail("unterminated comment", start);
    pos_ = close + 3;
  }

  void skip_pi() {
    const std::size_t start = pos_;
    pos_ += 2;
    const std::string target = parse_name();
    if (target.size() == 3 && (target[0] | 0x20) == 'x' && (target[1] | 0x20) == 'm' &&
        (target[2] | 0x20) == 'l') {
      fail("misplaced XML declaration", start);
    }
    const auto close = text_.find("?>", pos_);
    if (close == std::string_view::npos) fail("unterminated processing instruction", start);
    pos_ = close + 2;
  }

  // Skips the DOCTYPE declaration including any internal subset. Nothing in
  // it is interpreted, so declared entities stay undefined.
  void skip_doctype() {
    const std::size_t start = pos_;
    pos_ += 9;
    int bracket_depth = 0;
    while (!eof()) {
      const char c = peek();
      if (c == '"' || c == '\'') {
        const auto close = text_.find(c, pos_ + 1);
        if (close == std::string_view::npos) break;
        pos_ = close + 1;
        continue;
      }
      if (c == '[') ++bracket_depth;
      if (c == ']') --bracket_depth;
      if (c == '>' && bracket_depth <= 0) {
        ++pos_;
        return;
      }
      ++pos_;
    }
    fail("unterminated DOCTYPE", start);
  }

  void skip_misc(bool allow_doctype) {
    bool seen_doctype = false;
    while (true) {
      skip_space();
      if (eof()) return;
      if (lookahead("<!--")) {
        skip_comment();
      } else if (lookahead("<?")) {
        skip_pi();
      } else if (lookahead("<!DOCTYPE")) {
        if (!allow_doctype || seen_doctype) fail("unexpected DOCTYPE", pos_);
        seen_doctype = true;
        skip_doctype();
      } else {
        return;
      }
    }
  }

  // At '&'. Appends the replacement text.
  void parse_reference(std::string& out) {
    const std::size_t start = pos_;
    ++pos_;
    const auto semi = text_.find(';', pos_);
    if (semi == std::string_view::npos || semi - pos_ > 16) {
      fail("malformed entity reference", start);
    }
    const std::string_view name = text_.substr(pos_, semi - pos_);
    pos_ = semi + 1;
    if (name == "lt") {
      out.push_back('<');
    } else if (name == "gt") {
      out.push_back('>');
    } else if (name == "amp") {
      out.push_back('&');
    } else if (name == "quot") {
      out.push_back('"');
    } else if (name == "apos") {
      out.push_back('\'');
    } else if (name.starts_with('#')) {
      std::uint32_t cp = 0;
      const bool hex = name.size() > 1 && name[1] == 'x';
      const std::string_view digits = name.substr(hex ? 2 : 1);
      if (digits.empty()) fail("malformed character reference", start);
      for (char d : digits) {
        std::uint32_t v;
        if (d >= '0' && d <= '9') {
          v = static_cast<std::uint32_t>(d - '0');
        } else if (hex && d >= 'a' && d <= 'f') {
          v = static_cast<std::uint32_t>(d - 'a' + 10);
        } else if (hex && d >= 'A' && d <= 'F') {
          v = static_cast<std::uint32_t>(d - 'A' + 10);
        } else {
          fail("malformed character reference", start);
        }
        cp = cp * (hex ? 16 : 10) + v;
        if (cp > 0x10FFFF) fail("character reference out of range", start);
      }
      if (!is_xml_char(cp)) fail("character reference to an illegal character", start);
      append_utf8(out, cp);
    } else {
      fail("undefined entity '" + std::string(name) + "'", start);
    }
  }

  std::string parse_attribute_value() {
    if (eof() || (peek() != '"' && peek() != '\'')) fail("expected quoted value", pos_);
    const char quote = peek();
    ++pos_;
    std::string value;
    while (true) {
      if (eof()) fail("unterminated attribute value", pos_);
      const char c = peek();
      if (c == quote) {
        ++pos_;
        return value;
      }
      if (c == '<') fail("'<' in attribute value", pos_);
      if (c == '&') {
        parse_reference(value);
        continue;
      }
      if (c == '\r') {
        value.push_back(' ');
        ++pos_;
        if (!eof() && peek() == '\n') ++pos_;
        continue;
      }
      value.push_back(c == '\t' || c == '\n' ? ' ' : c);
      ++pos_;
    }
  }

  std::string resolve(const NamespaceBindings& scope, const std::string& prefix,
                      std::size_t offset) {
    auto it = scope.find(prefix);
    if (it == scope.end()) {
      if (prefix.empty()) return {};
      fail("unbound namespace prefix '" + prefix + "'", offset);
    }
    return it->second;
  }

  Element parse_element(std::vector<NamespaceBindings>& scopes, std::size_t depth) {
    if (depth > options_.max_depth) fail("nesting too deep", pos_);
    Element element;
    element.begin = pos_;
    expect("<");
    const std::size_t name_offset = pos_;
    const std::string qname = parse_name();

    std::vector<RawAttribute> raw;
    bool self_closing = false;
    while (true) {
      const bool had_space = !eof() && is_space(peek());
      skip_space();
      if (eof()) fail("unterminated start tag", element.begin);
      if (lookahead("/>")) {
        pos_ += 2;
        self_closing = true;
        break;
      }
      if (peek() == '>') {
        ++pos_;
        break;
      }
      if (!had_space) fail("expected whitespace before attribute", pos_);
      const std::size_t attr_offset = pos_;
      std::string attr_name = parse_name();
      skip_space();
      expect("=");
      skip_space();
      std::string value = parse_attribute_value();
      for (const auto& a : raw) {
        if (a.qname == attr_name) fail("duplicate attribute '" + attr_name + "'", attr_offset);
      }
      raw.push_back({std::move(attr_name), std::move(value), attr_offset});
    }

    NamespaceBindings scope = scopes.back();
    for (const auto& a : raw) {
      if (a.qname == "xmlns") {
        element.declarations[""] = a.value;
        if (a.value.empty()) {
          scope.erase("");
        } else {
          scope[""] = a.value;
        }
      } else if (a.qname.starts_with("xmlns:")) {
        const std::string prefix = a.qname.substr(6);
        if (prefix.empty() || a.value.empty()) fail("invalid namespace declaration", a.offset);
        element.declarations[prefix] = a.value;
        scope[prefix] = a.value;
      }
    }

    auto [prefix, local] = split_qname(qname);
    if (local.empty() || local.find(':') != std::string::npos) {
      fail("malformed element name '" + qname + "'", name_offset);
    }
    element.ns_uri = resolve(scope, prefix, name_offset);
    element.prefix = std::move(prefix);
    element.local_name = std::move(local);

    for (auto& a : raw) {
      if (a.qname == "xmlns" || a.qname.starts_with("xmlns:")) continue;
      auto [aprefix, alocal] = split_qname(a.qname);
      Attribute attr;
      attr.ns_uri = aprefix.empty() ? std::string{} : resolve(scope, aprefix, a.offset);
      attr.prefix = std::move(aprefix);
      attr.local_name = std::move(alocal);
      attr.value = std::move(a.value);
      for (const auto& other : element.attributes) {
        if (other.ns_uri == attr.ns_uri && other.local_name == attr.local_name) {
          fail("duplicate attribute '" + a.qname + "'", a.offset);
        }
      }
      element.attributes.push_back(std::move(attr));
    }

    if (self_closing) {
      element.end = pos_;
      return element;
    }

    scopes.push_back(std::move(scope));
    parse_content(element, scopes, depth);
    scopes.pop_back();

    const std::size_t close_offset = pos_;
    expect("</");
    const std::string close_name = parse_name();
    if (close_name != qname) {
      fail("mismatched end tag '" + close_name + "', expected '" + qname + "'", close_offset);
    }
    skip_space();
    expect(">");
    element.end = pos_;
    return element;
  }

  void parse_content(Element& element, std::vector<NamespaceBindings>& scopes,
                     std::size_t depth) {
    while (true) {
      if (eof()) fail("unterminated element '" + element.local_name + "'", element.begin);
      const char c = peek();
      if (c == '<') {
        if (lookahead("</")) return;
        if (lookahead("<!--")) {
          skip_comment();
        } else if (lookahead("<![CDATA[")) {
          const std::size_t start = pos_;
          pos_ += 9;
          const auto close = text_.find("]]>", pos_);
          if (close == std::string_view::npos) fail("unterminated CDATA section", start);
          append_text(element.texts.back(), text_.substr(pos_, close - pos_));
          pos_ = close + 3;
        } else if (lookahead("<?")) {
          skip_pi();
        } else if (lookahead("<!")) {
          fail("unexpected markup declaration", pos_);
        } else {
          element.children.push_back(parse_element(scopes, depth + 1));
          element.texts.emplace_back();
        }
      } else if (c == '&') {
        parse_reference(element.texts.back());
      } else {
        const std::size_t start = pos_;
        while (!eof() && peek() != '<' && peek() != '&') ++pos_;
        append_text(element.texts.back(), text_.substr(start, pos_ - start));
      }
    }
  }

  // Line-end normalization: CR LF and lone CR become LF.
  static void append_text(std::string& out, std::string_view chunk) {
    for (std::size_t i = 0; i < chunk.size(); ++i) {
      if (chunk[i] == '\r') {
        out.push_back('\n');
        if (i + 1 < chunk.size() && chunk[i + 1] == '\n') ++i;
      } else {
        out.push_back(chunk[i]);
      }
    }
  }

  std::string_view text_;
  const ParseOptions& options_;
  std::size_t pos_ = 0;
};

void collect(const Element& e, std::string_view ns, std::string_view local,
             std::vector<const Element*>& out) {
  for (const auto& c : e.children) {
    if (c.is(ns, local)) out.push_back(&c);
    collect(c, ns, local, out);
  }
}

const Element* find_first(const Element& e, std::string_view ns, std::string_view local) {
  for (const auto& c : e.children) {
    if (c.is(ns, local)) return &c;
    if (const Element* hit = find_first(c, ns, local)) return hit;
  }
  return nullptr;
}

void deep_text(const Element& e, std::string& out) {
  for (std::size_t i = 0; i < e.children.size(); ++i) {
    out += e.texts[i];
    deep_text(e.children[i], out);
  }
  out += e.texts.back();
}

bool path_to(const Element& from, const Element& target,
             std::vector<const Element*>& path) {
  if (&from == &target) return true;
  for (const auto& c : from.children) {
    path.push_back(&from);
    if (path_to(c, target, path)) return true;
    path.pop_back();
  }
  return false;
}

}  // namespace

const Element* Element::child(std::string_view ns, std::string_view local) const {
  for (const auto& c : children) {
    if (c.is(ns, local)) return &c;
  }
  return nullptr;
}

std::vector<const Element*> Element::children_named(std::string_view ns,
                                                    std::string_view local) const {
  std::vector<const Element*> out;
  for (const auto& c : children) {
    if (c.is(ns, local)) out.push_back(&c);
  }
  return out;
}

std::vector<const Element*> Element::descendants(std::string_view ns,
                                                 std::string_view local) const {
  std::vector<const Element*> out;
  collect(*this, ns, local, out);
  return out;
}

const Element* Element::first_descendant(std::string_view ns,
                                         std::string_view local) const {
  return find_first(*this, ns, local);
}

std::optional<std::string_view> Element::attribute(std::string_view local,
                                                   std::string_view ns) const {
  for (const auto& a : attributes) {
    if (a.local_name == local && a.ns_uri == ns) return a.value;
  }
  return std::nullopt;
}

std::string Element::text() const {
  std::string out;
  deep_text(*this, out);
  return out;
}

Document parse(std::string_view text, const ParseOptions& options) {
  return Parser(text, options).run();
}

std::string root_namespace(std::string_view text) {
  return parse(text).root.ns_uri;
}

NamespaceBindings in_scope_bindings(const Document& doc, const Element& target,
                                    const NamespaceBindings& inherited) {
  NamespaceBindings scope = inherited;
  std::vector<const Element*> ancestors;
  if (!path_to(doc.root, target, ancestors)) {
    throw Error(ErrorCode::kInvalidInput, "element is not part of the document");
  }
  for (const Element* a : ancestors) {
    for (const auto& [prefix, uri] : a->declarations) {
      if (uri.empty()) {
        scope.erase(prefix);
      } else {
        scope[prefix] = uri;
      }
    }
  }
  return scope;
}

}  // namespace metalake::xml
