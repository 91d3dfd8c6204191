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

#include "metalake/parsers.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <string>

#include "metalake/error.hpp"
#include "metalake/text.hpp"

namespace metalake {

namespace {

using xml::Element;

bool iequals_prefix(std::string_view text, std::string_view prefix) {
  if (text.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(text[i])) != prefix[i]) return false;
  }
  return true;
}

// Accumulates crosswalk output. Scalars keep the first non-empty value, lists
// keep every non-empty value; all text is trimmed and NFC-normalized.
class FieldsBuilder {
 public:
  void title(std::string value) {
    if (out_.descriptive.title.empty()) out_.descriptive.title = clean_text(value);
  }
  void creator(std::string name, std::optional<std::string> identifier = std::nullopt) {
    name = clean_text(name);
    if (name.empty()) return;
    if (identifier) {
      *identifier = clean_text(*identifier);
      if (identifier->empty()) identifier.reset();
    }
    out_.descriptive.creators.push_back({std::move(name), std::move(identifier)});
  }
  void identifier(IdentifierScheme scheme, std::string value) {
    value = clean_text(value);
    if (!value.empty()) out_.descriptive.identifiers.push_back({scheme, std::move(value)});
  }
  void subject(std::string value) {
    value = clean_text(value);
    if (!value.empty()) out_.descriptive.subjects.push_back(std::move(value));
  }
  void year(std::string_view text) {
    if (!out_.descriptive.publication_year) out_.descriptive.publication_year = extract_year(text);
  }
  void resource_type(ResourceType type) {
    if (!out_.descriptive.resource_type) out_.descriptive.resource_type = type;
  }
  void relation(IdentifierScheme scheme, std::string value, RelationLabel label) {
    value = clean_text(value);
    if (!value.empty()) out_.embedded_relations.push_back({{scheme, std::move(value)}, label});
  }
  void scalar(std::optional<std::string>& field, std::string_view value) {
    if (field) return;
    std::string cleaned = clean_text(value);
    if (!cleaned.empty()) field = std::move(cleaned);
  }

  DescriptiveBlock& descriptive() { return out_.descriptive; }
  TechnicalBlock& technical() { return out_.technical; }
  ParsedFields take() { return std::move(out_); }

 private:
  ParsedFields out_;
};

std::string text_of(const Element* e) { return e ? e->text() : std::string{}; }

ParsedFields dublin_core(const Element& root) {
  FieldsBuilder b;
  auto& d = b.descriptive();
  for (const auto& e : root.children) {
    if (e.ns_uri != ns::kDc) continue;
    const std::string& name = e.local_name;
    const std::string value = e.text();
    if (name == "title") {
      b.title(value);
    } else if (name == "creator") {
      b.creator(value);
    } else if (name == "publisher") {
      b.scalar(d.publisher, value);
    } else if (name == "date") {
      b.year(value);
    } else if (name == "type") {
      if (!clean_text(value).empty()) b.resource_type(map_resource_type(clean_text(value)));
    } else if (name == "identifier") {
      const std::string v = clean_text(value);
      b.identifier(sniff_identifier_scheme(v), v);
    } else if (name == "description") {
      b.scalar(d.description, value);
    } else if (name == "subject") {
      b.subject(value);
    } else if (name == "language") {
      b.scalar(d.language, value);
    } else if (name == "rights") {
      b.scalar(d.rights, value);
    } else if (name == "format") {
      b.scalar(b.technical().format, value);
    } else if (name == "relation") {
      const std::string v = clean_text(value);
      if (iequals_prefix(v, "ispartof:")) {
        const std::string target = clean_text(std::string_view(v).substr(9));
        b.relation(sniff_identifier_scheme(target), target, RelationLabel::kIsPartOf);
      }
    }
  }
  return b.take();
}

ParsedFields datacite(const Element& root) {
  constexpr auto k = ns::kDataCite;
  FieldsBuilder b;
  auto& d = b.descriptive();

  for (const Element* id : root.children_named(k, "identifier")) {
    b.identifier(map_identifier_scheme(id->attribute("identifierType").value_or("")), id->text());
  }
  if (const Element* titles = root.child(k, "titles")) {
    b.title(text_of(titles->child(k, "title")));
  }
  if (const Element* creators = root.child(k, "creators")) {
    for (const Element* c : creators->children_named(k, "creator")) {
      std::optional<std::string> identifier;
      if (const Element* ni = c->child(k, "nameIdentifier")) identifier = ni->text();
      b.creator(text_of(c->child(k, "creatorName")), identifier);
    }
  }
  if (const Element* p = root.child(k, "publisher")) b.scalar(d.publisher, p->text());
  if (const Element* y = root.child(k, "publicationYear")) b.year(y->text());
  if (const Element* rt = root.child(k, "resourceType")) {
    if (auto general = rt->attribute("resourceTypeGeneral")) {
      const std::string label = clean_text(*general);
      b.resource_type(parse_resource_type(label).value_or(map_resource_type(label)));
    }
  }
  if (const Element* ds = root.child(k, "descriptions")) {
    if (const Element* desc = ds->child(k, "description")) b.scalar(d.description, desc->text());
  }
  if (const Element* subjects = root.child(k, "subjects")) {
    for (const Element* s : subjects->children_named(k, "subject")) b.subject(s->text());
  }
  if (const Element* lang = root.child(k, "language")) b.scalar(d.language, lang->text());
  if (const Element* rl = root.child(k, "rightsList")) {
    if (const Element* r = rl->child(k, "rights")) {
      b.scalar(d.rights, r->text());
      if (auto id = r->attribute("rightsIdentifier")) b.scalar(d.license, *id);
    }
  }
  if (const Element* sizes = root.child(k, "sizes")) {
    if (const Element* s = sizes->child(k, "size")) {
      static const std::regex kBytes(R"(^\s*([0-9]+)\s*(bytes)?\s*$)", std::regex::icase);
      const std::string value = s->text();
      std::smatch m;
      if (std::regex_match(value, m, kBytes) && m[1].length() <= 18) {
        b.technical().size = std::stoll(m[1].str());
      }
    }
  }
  if (const Element* formats = root.child(k, "formats")) {
    if (const Element* f = formats->child(k, "format")) b.scalar(b.technical().format, f->text());
  }
  if (const Element* related = root.child(k, "relatedIdentifiers")) {
    for (const Element* r : related->children_named(k, "relatedIdentifier")) {
      auto label = parse_relation_label(clean_text(r->attribute("relationType").value_or("")));
      if (!label) continue;
      b.relation(map_identifier_scheme(r->attribute("relatedIdentifierType").value_or("")),
                 r->text(), *label);
    }
  }
  return b.take();
}

IdentifierScheme mods_scheme(const Element& identifier) {
  if (auto type = identifier.attribute("type")) return map_identifier_scheme(*type);
  return sniff_identifier_scheme(clean_text(identifier.text()));
}

ParsedFields mods(const Element& document_root) {
  constexpr auto k = ns::kMods;
  const Element* root = &document_root;
  if (root->local_name == "modsCollection") {
    root = root->child(k, "mods");
    if (root == nullptr) return {};
  }
  FieldsBuilder b;
  auto& d = b.descriptive();

  for (const Element* ti : root->children_named(k, "titleInfo")) {
    const Element* title = ti->child(k, "title");
    if (title == nullptr || clean_text(title->text()).empty()) continue;
    std::string full = clean_text(title->text());
    if (const Element* sub = ti->child(k, "subTitle")) {
      const std::string subtitle = clean_text(sub->text());
      if (!subtitle.empty()) full += ": " + subtitle;
    }
    b.title(full);
    break;
  }
  for (const Element* name : root->children_named(k, "name")) {
    std::string joined;
    for (const Element* part : name->children_named(k, "namePart")) {
      const std::string p = clean_text(part->text());
      if (p.empty()) continue;
      if (!joined.empty()) joined += ", ";
      joined += p;
    }
    std::optional<std::string> identifier;
    if (const Element* ni = name->child(k, "nameIdentifier")) identifier = ni->text();
    b.creator(joined, identifier);
  }
  for (const Element* origin : root->children_named(k, "originInfo")) {
    if (const Element* p = origin->child(k, "publisher")) b.scalar(d.publisher, p->text());
    for (const Element* di : origin->children_named(k, "dateIssued")) b.year(di->text());
  }
  if (const Element* type = root->child(k, "typeOfResource")) {
    const std::string label = clean_text(type->text());
    if (!label.empty()) b.resource_type(map_resource_type(label));
  }
  if (const Element* abs = root->child(k, "abstract")) b.scalar(d.description, abs->text());
  for (const Element* subject : root->children_named(k, "subject")) {
    for (const Element* topic : subject->children_named(k, "topic")) b.subject(topic->text());
  }
  if (const Element* lang = root->child(k, "language")) {
    if (const Element* term = lang->child(k, "languageTerm")) b.scalar(d.language, term->text());
  }
  if (const Element* ac = root->child(k, "accessCondition")) b.scalar(d.rights, ac->text());
  for (const Element* id : root->children_named(k, "identifier")) {
    b.identifier(mods_scheme(*id), id->text());
  }
  for (const Element* loc : root->children_named(k, "location")) {
    if (const Element* url = loc->child(k, "url")) b.scalar(b.technical().location, url->text());
  }
  for (const Element* rel : root->children_named(k, "relatedItem")) {
    if (rel->attribute("type") != std::optional<std::string_view>("host")) continue;
    for (const Element* id : rel->children_named(k, "identifier")) {
      b.relation(mods_scheme(*id), id->text(), RelationLabel::kIsPartOf);
    }
  }
  return b.take();
}

// Concatenated subfield codes of a MARC datafield, in document order.
std::vector<std::string> subfields(const Element& field, char code) {
  std::vector<std::string> out;
  for (const Element* sf : field.children_named(ns::kMarc, "subfield")) {
    auto c = sf->attribute("code");
    if (c && c->size() == 1 && (*c)[0] == code) out.push_back(sf->text());
  }
  return out;
}

std::optional<std::string> first_subfield(const Element& field, char code) {
  for (auto& v : subfields(field, code)) {
    if (!clean_text(v).empty()) return v;
  }
  return std::nullopt;
}

ParsedFields marc(const Element& document_root) {
  constexpr auto k = ns::kMarc;
  const Element* root = &document_root;
  if (root->local_name == "collection") {
    root = root->child(k, "record");
    if (root == nullptr) return {};
  }
  FieldsBuilder b;
  auto& d = b.descriptive();

  if (const Element* leader = root->child(k, "leader")) {
    const std::string text = leader->text();
    if (text.size() > 6) {
      switch (text[6]) {
        case 'a': b.resource_type(ResourceType::kText); break;
        case 'e': b.resource_type(ResourceType::kImage); break;
        case 'g': b.resource_type(ResourceType::kAudiovisual); break;
        default: b.resource_type(ResourceType::kOther); break;
      }
    }
  }
  for (const Element* cf : root->children_named(k, "controlfield")) {
    if (cf->attribute("tag") != std::optional<std::string_view>("008")) continue;
    const std::string text = cf->text();
    if (text.size() >= 11) {
      const std::string y = text.substr(7, 4);
      if (std::all_of(y.begin(), y.end(), [](unsigned char c) { return std::isdigit(c); })) {
        d.publication_year = std::stoi(y);
      }
    }
    break;
  }

  for (const Element* df : root->children_named(k, "datafield")) {
    const std::string tag(df->attribute("tag").value_or(""));
    if (tag == "245") {
      if (auto a = first_subfield(*df, 'a')) {
        std::string title = clean_text(*a);
        if (auto sub = first_subfield(*df, 'b')) title += " " + clean_text(*sub);
        b.title(title);
      }
    } else if (tag == "100" || tag == "700") {
      if (auto a = first_subfield(*df, 'a')) b.creator(*a);
    } else if (tag == "260" || tag == "264") {
      if (auto pub = first_subfield(*df, 'b')) b.scalar(d.publisher, *pub);
    } else if (tag == "520") {
      if (auto a = first_subfield(*df, 'a')) b.scalar(d.description, *a);
    } else if (tag == "650") {
      if (auto a = first_subfield(*df, 'a')) b.subject(*a);
    } else if (tag == "041") {
      if (auto a = first_subfield(*df, 'a')) b.scalar(d.language, *a);
    } else if (tag == "020") {
      for (auto& a : subfields(*df, 'a')) b.identifier(IdentifierScheme::kISBN, a);
    } else if (tag == "022") {
      for (auto& a : subfields(*df, 'a')) b.identifier(IdentifierScheme::kISSN, a);
    } else if (tag == "856") {
      if (auto u = first_subfield(*df, 'u')) b.scalar(b.technical().location, *u);
    } else if (tag == "773") {
      for (auto& w : subfields(*df, 'w')) {
        const std::string v = clean_text(w);
        b.relation(sniff_identifier_scheme(v), v, RelationLabel::kIsPartOf);
      }
    }
  }
  return b.take();
}

ParsedFields lido(const Element& document_root) {
  constexpr auto k = ns::kLido;
  const Element* root = &document_root;
  if (root->local_name == "lidoWrap") {
    root = root->child(k, "lido");
    if (root == nullptr) return {};
  }
  FieldsBuilder b;
  auto& d = b.descriptive();

  if (const Element* desc = root->first_descendant(k, "descriptiveMetadata")) {
    if (const Element* ts = desc->first_descendant(k, "titleSet")) {
      b.title(text_of(ts->child(k, "appellationValue")));
    }
    if (const Element* wt = desc->first_descendant(k, "objectWorkType")) {
      if (const Element* term = wt->child(k, "term")) {
        const std::string label = clean_text(term->text());
        if (!label.empty()) b.resource_type(map_resource_type(label));
      }
    }
    if (const Element* rw = desc->first_descendant(k, "repositoryWrap")) {
      if (const Element* lb = rw->first_descendant(k, "legalBodyName")) {
        const Element* av = lb->child(k, "appellationValue");
        b.scalar(d.publisher, av ? av->text() : lb->text());
      }
    }
    if (const Element* sw = desc->first_descendant(k, "subjectWrap")) {
      for (const Element* term : sw->descendants(k, "term")) b.subject(term->text());
    }
  }
  if (const Element* rw = root->first_descendant(k, "recordWrap")) {
    for (const Element* id : rw->children_named(k, "recordID")) {
      b.identifier(IdentifierScheme::kOther, id->text());
    }
  }
  if (const Element* res = root->first_descendant(k, "resourceWrap")) {
    if (const Element* link = res->first_descendant(k, "linkResource")) {
      b.scalar(b.technical().location, link->text());
    }
  }
  return b.take();
}

}  // namespace

std::string_view canonical_namespace(SourceFormat format) {
  switch (format) {
    case SourceFormat::kDataCite: return ns::kDataCite;
    case SourceFormat::kDublinCore: return ns::kOaiDc;
    case SourceFormat::kLIDO: return ns::kLido;
    case SourceFormat::kMARC: return ns::kMarc;
    case SourceFormat::kMODS: return ns::kMods;
  }
  return {};
}

std::optional<SourceFormat> format_for_namespace(std::string_view ns_uri) {
  for (SourceFormat f : kAllSourceFormats) {
    if (canonical_namespace(f) == ns_uri) return f;
  }
  return std::nullopt;
}

std::optional<SourceFormat> detect_namespace(std::string_view xml) {
  return format_for_namespace(xml::root_namespace(xml));
}

std::optional<int> extract_year(std::string_view text) {
  int run = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (std::isdigit(static_cast<unsigned char>(text[i]))) {
      if (++run == 4) {
        return std::stoi(std::string(text.substr(i - 3, 4)));
      }
    } else {
      run = 0;
    }
  }
  return std::nullopt;
}

ParsedFields crosswalk(SourceFormat format, const xml::Element& root) {
  if (root.ns_uri != canonical_namespace(format)) {
    throw Error(ErrorCode::kFormatMismatch,
                "root namespace '" + root.ns_uri + "' does not match format " +
                    std::string(to_string(format)));
  }
  switch (format) {
    case SourceFormat::kDataCite: return datacite(root);
    case SourceFormat::kDublinCore: return dublin_core(root);
    case SourceFormat::kLIDO: return lido(root);
    case SourceFormat::kMARC: return marc(root);
    case SourceFormat::kMODS: return mods(root);
  }
  throw Error(ErrorCode::kInvalidInput, "unknown source format");
}

ParsedFields crosswalk(SourceFormat format, std::string_view xml,
                       const xml::NamespaceBindings& inherited) {
  xml::ParseOptions options;
  options.inherited = inherited;
  const xml::Document doc = xml::parse(xml, options);
  return crosswalk(format, doc.root);
}

}  // namespace metalake
