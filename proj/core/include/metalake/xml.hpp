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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace metalake::xml {

inline constexpr std::string_view kXmlNamespace = "http://www.w3.org/XML/1998/namespace";

// prefix -> namespace URI; the empty prefix is the default namespace.
using NamespaceBindings = std::map<std::string, std::string, std::less<>>;

struct Attribute {
  std::string prefix;
  std::string local_name;
  std::string ns_uri;
  std::string value;
};

struct Element {
  std::string prefix;
  std::string local_name;
  std::string ns_uri;
  std::vector<Attribute> attributes;
  std::vector<Element> children;
  // Character data around the children: texts[i] precedes children[i] and
  // texts.back() follows the last child. Always children.size() + 1 entries.
  std::vector<std::string> texts{std::string{}};
  // Namespace declarations made on this element's start tag.
  NamespaceBindings declarations;
  // Byte range [begin, end) of the element in the parsed input, from '<' of
  // the start tag through '>' of the end tag.
  std::size_t begin = 0;
  std::size_t end = 0;

  bool is(std::string_view ns, std::string_view local) const {
    return ns_uri == ns && local_name == local;
  }

  const Element* child(std::string_view ns, std::string_view local) const;
  std::vector<const Element*> children_named(std::string_view ns,
                                             std::string_view local) const;
  // All matching descendants in document order (excluding this element).
  std::vector<const Element*> descendants(std::string_view ns,
                                          std::string_view local) const;
  const Element* first_descendant(std::string_view ns, std::string_view local) const;

  // Attribute by local name; `ns` empty means an unqualified attribute.
  std::optional<std::string_view> attribute(std::string_view local,
                                            std::string_view ns = {}) const;

  // Concatenated character data of this element and its descendants.
  std::string text() const;
};

struct Document {
  Element root;
};

struct ParseOptions {
  // Bindings in scope before the root element, e.g. inherited from an
  // enclosing envelope the fragment was cut out of.
  NamespaceBindings inherited;
  std::size_t max_depth = 256;
};

// Parses UTF-8 XML. Only the five predefined entities and character
// references are expanded; DOCTYPE declarations are skipped without reading
// the internal subset or fetching anything. Throws ParseError with
// line/column on malformed input.
Document parse(std::string_view text, const ParseOptions& options = {});

// Namespace URI of the root element, parsing the document fully.
std::string root_namespace(std::string_view text);

// Bindings in scope at `target` (declarations of its ancestors within `doc`,
// outermost first, plus the parse-time inherited ones). `target` must be an
// element of `doc`.
NamespaceBindings in_scope_bindings(const Document& doc, const Element& target,
                                    const NamespaceBindings& inherited = {});

}  // namespace metalake::xml
