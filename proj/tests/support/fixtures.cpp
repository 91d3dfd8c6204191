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

#include "fixtures.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <unistd.h>


namespace metalake::testing {

TempDir::TempDir() {
  std::string tmpl = (std::filesystem::temp_directory_path() / "metalake-test-XXXXXX").string();
  if (mkdtemp(tmpl.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
  path_ = tmpl;
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

MetadataRecord make_record(const std::string& source, const std::string& original_identifier,
                           const std::string& title) {
  MetadataRecord r;
  r.descriptive.title = title;
  r.processual.record_id = compute_record_id(source, original_identifier);
  r.processual.source = source;
  r.processual.original_identifier = original_identifier;
  r.processual.created_at = r.processual.modified_at = now_utc();
  r.processual.data_steward = "steward@example.org";
  r.processual.ingest_format = SourceFormat::kDataCite;
  r.raw.payload = "<record>" + xml_escape(title) + "</record>";
  r.social.quality_score = quality_score(r);
  return r;
}

std::vector<MetadataRecord> generate_corpus(std::size_t n, std::uint64_t seed) {
  static const std::vector<std::string> kWords = {
      "climate", "data",    "model",   "ocean",  "river",   "soil",   "genome",  "protein",
      "library", "archive", "museum",  "map",    "survey",  "census", "energy",  "solar",
      "wind",    "forest",  "glacier", "city",   "traffic", "health", "vaccine", "music",
      "Ärzte",   "straße",  "café",    "naïve",  "quantum", "neural", "graph",   "lake"};
  static const std::vector<std::string> kSources = {"https://a.example/oai", "https://b.example/oai",
                                                    "https://c.example/s3/bucket"};
  static const std::vector<std::string> kStewards = {"alice@example.org", "bob@example.org"};
  static const std::vector<std::string> kLanguages = {"en", "de", "fr"};
  static const std::vector<ResourceType> kTypes = {ResourceType::kDataset, ResourceType::kText,
                                                   ResourceType::kImage, ResourceType::kSoftware,
                                                   ResourceType::kOther};
  std::mt19937_64 rng(seed);
  auto pick = [&](const auto& v) -> const auto& { return v[rng() % v.size()]; };
  auto chance = [&](int percent) { return static_cast<int>(rng() % 100) < percent; };
  auto words = [&](int lo, int hi) {
    std::string out;
    const int count = lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
    for (int i = 0; i < count; ++i) {
      if (!out.empty()) out.push_back(' ');
      out += pick(kWords);
    }
    return out;
  };

  std::vector<MetadataRecord> out;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string source = pick(kSources);
    MetadataRecord r = make_record(source, "rec-" + std::to_string(i), words(1, 4));
    auto& d = r.descriptive;
    if (chance(70)) d.creators.push_back({words(1, 2), std::nullopt});
    if (chance(20)) d.creators.push_back({words(1, 2), "orcid:" + std::to_string(i)});
    if (chance(50)) d.publisher = words(1, 2);
    if (chance(80)) d.publication_year = 1990 + static_cast<int>(rng() % 35);
    if (chance(75)) d.resource_type = pick(kTypes);
    if (chance(60)) d.identifiers.push_back({IdentifierScheme::kDOI, "10.1234/gen." + std::to_string(i)});
    if (chance(50)) d.description = words(3, 12);
    if (chance(60)) {
      const int k = 1 + static_cast<int>(rng() % 3);
      for (int s = 0; s < k; ++s) d.subjects.push_back(pick(kWords));
    }
    if (chance(70)) d.language = pick(kLanguages);
    if (chance(30)) d.rights = "open";
    if (chance(20)) d.license = "CC-BY-4.0";
    if (chance(40)) r.technical.size = static_cast<std::int64_t>(rng() % 100000);
    r.processual.data_steward = pick(kStewards);
    r.processual.ingest_format = kAllSourceFormats[rng() % kAllSourceFormats.size()];
    r.social.keywords = d.subjects;
    r.social.quality_score = quality_score(r);
    out.push_back(std::move(r));
  }
  return out;
}

namespace {

std::string esc(const std::string& s) { return xml_escape(s); }

}  // namespace

std::string datacite_doc(const DocFields& s) {
  std::string x = "<resource xmlns=\"http://datacite.org/schema/kernel-4\">\n";
  if (s.doi) x += "  <identifier identifierType=\"DOI\">" + esc(*s.doi) + "</identifier>\n";
  x += "  <creators>\n";
  for (const auto& c : s.creators) x += "    <creator><creatorName>" + esc(c) + "</creatorName></creator>\n";
  x += "  </creators>\n  <titles><title>" + esc(s.title) + "</title></titles>\n";
  if (s.year) x += "  <publicationYear>" + std::to_string(*s.year) + "</publicationYear>\n";
  if (s.resource_type) x += "  <resourceType resourceTypeGeneral=\"" + esc(*s.resource_type) + "\"/>\n";
  if (!s.subjects.empty()) {
    x += "  <subjects>\n";
    for (const auto& sub : s.subjects) x += "    <subject>" + esc(sub) + "</subject>\n";
    x += "  </subjects>\n";
  }
  if (s.language) x += "  <language>" + esc(*s.language) + "</language>\n";
  if (!s.relations.empty()) {
    x += "  <relatedIdentifiers>\n";
    for (const auto& [type, doi] : s.relations) {
      x += "    <relatedIdentifier relatedIdentifierType=\"DOI\" relationType=\"" + esc(type) +
           "\">" + esc(doi) + "</relatedIdentifier>\n";
    }
    x += "  </relatedIdentifiers>\n";
  }
  x += "</resource>";
  return x;
}

std::string dublin_core_doc(const DocFields& s) {
  std::string x =
      "<oai_dc:dc xmlns:oai_dc=\"http://www.openarchives.org/OAI/2.0/oai_dc/\" "
      "xmlns:dc=\"http://purl.org/dc/elements/1.1/\">\n";
  x += "  <dc:title>" + esc(s.title) + "</dc:title>\n";
  for (const auto& c : s.creators) x += "  <dc:creator>" + esc(c) + "</dc:creator>\n";
  if (s.year) x += "  <dc:date>" + std::to_string(*s.year) + "-01-01</dc:date>\n";
  if (s.resource_type) x += "  <dc:type>" + esc(*s.resource_type) + "</dc:type>\n";
  if (s.doi) x += "  <dc:identifier>" + esc(*s.doi) + "</dc:identifier>\n";
  for (const auto& sub : s.subjects) x += "  <dc:subject>" + esc(sub) + "</dc:subject>\n";
  if (s.language) x += "  <dc:language>" + esc(*s.language) + "</dc:language>\n";
  for (const auto& [type, doi] : s.relations) {
    if (type == "IsPartOf") x += "  <dc:relation>ispartof:" + esc(doi) + "</dc:relation>\n";
  }
  x += "</oai_dc:dc>";
  return x;
}

std::string mods_doc(const DocFields& s) {
  std::string x = "<mods xmlns=\"http://www.loc.gov/mods/v3\">\n";
  x += "  <titleInfo><title>" + esc(s.title) + "</title></titleInfo>\n";
  for (const auto& c : s.creators) x += "  <name><namePart>" + esc(c) + "</namePart></name>\n";
  if (s.resource_type) x += "  <typeOfResource>" + esc(*s.resource_type) + "</typeOfResource>\n";
  if (s.year) x += "  <originInfo><dateIssued>" + std::to_string(*s.year) + "</dateIssued></originInfo>\n";
  if (s.language) x += "  <language><languageTerm>" + esc(*s.language) + "</languageTerm></language>\n";
  for (const auto& sub : s.subjects) x += "  <subject><topic>" + esc(sub) + "</topic></subject>\n";
  if (s.doi) x += "  <identifier type=\"doi\">" + esc(*s.doi) + "</identifier>\n";
  for (const auto& [type, doi] : s.relations) {
    if (type == "IsPartOf") {
      x += "  <relatedItem type=\"host\"><identifier type=\"doi\">" + esc(doi) +
           "</identifier></relatedItem>\n";
    }
  }
  x += "</mods>";
  return x;
}

std::string marc_doc(const DocFields& s) {
  std::string x = "<record xmlns=\"http://www.loc.gov/MARC21/slim\">\n";
  x += "  <leader>00000nam a2200000 a 4500</leader>\n";
  const std::string year = s.year ? std::to_string(*s.year) : std::string("    ");
  x += "  <controlfield tag=\"008\">240501s" + year + "    xx            000 0 eng d</controlfield>\n";
  if (s.doi) {
    x += "  <datafield tag=\"024\" ind1=\"7\" ind2=\" \"><subfield code=\"a\">" + esc(*s.doi) +
         "</subfield><subfield code=\"2\">doi</subfield></datafield>\n";
  }
  if (s.language) {
    x += "  <datafield tag=\"041\" ind1=\" \" ind2=\" \"><subfield code=\"a\">" + esc(*s.language) +
         "</subfield></datafield>\n";
  }
  for (std::size_t i = 0; i < s.creators.size(); ++i) {
    x += "  <datafield tag=\"" + std::string(i == 0 ? "100" : "700") +
         "\" ind1=\"1\" ind2=\" \"><subfield code=\"a\">" + esc(s.creators[i]) +
         "</subfield></datafield>\n";
  }
  x += "  <datafield tag=\"245\" ind1=\"1\" ind2=\"0\"><subfield code=\"a\">" + esc(s.title) +
       "</subfield></datafield>\n";
  for (const auto& sub : s.subjects) {
    x += "  <datafield tag=\"650\" ind1=\" \" ind2=\"0\"><subfield code=\"a\">" + esc(sub) +
         "</subfield></datafield>\n";
  }
  for (const auto& [type, doi] : s.relations) {
    if (type == "IsPartOf") {
      x += "  <datafield tag=\"773\" ind1=\"0\" ind2=\" \"><subfield code=\"w\">" + esc(doi) +
           "</subfield></datafield>\n";
    }
  }
  x += "</record>";
  return x;
}

std::string lido_doc(const DocFields& s) {
  std::string x = "<lido:lido xmlns:lido=\"http://www.lido-schema.org\">\n";
  x += "  <lido:lidoRecID lido:type=\"local\">" + esc(s.doi.value_or("none")) + "</lido:lidoRecID>\n";
  x += "  <lido:descriptiveMetadata xml:lang=\"en\">\n";
  x += "    <lido:objectClassificationWrap><lido:objectWorkTypeWrap><lido:objectWorkType><lido:term>" +
       esc(s.resource_type.value_or("object")) +
       "</lido:term></lido:objectWorkType></lido:objectWorkTypeWrap></lido:objectClassificationWrap>\n";
  x += "    <lido:objectIdentificationWrap><lido:titleWrap><lido:titleSet><lido:appellationValue>" +
       esc(s.title) + "</lido:appellationValue></lido:titleSet></lido:titleWrap></lido:objectIdentificationWrap>\n";
  if (!s.subjects.empty()) {
    x += "    <lido:objectRelationWrap><lido:subjectWrap><lido:subjectSet><lido:subject>";
    for (const auto& sub : s.subjects) {
      x += "<lido:subjectConcept><lido:term>" + esc(sub) + "</lido:term></lido:subjectConcept>";
    }
    x += "</lido:subject></lido:subjectSet></lido:subjectWrap></lido:objectRelationWrap>\n";
  }
  x += "  </lido:descriptiveMetadata>\n";
  if (s.doi) {
    x += "  <lido:administrativeMetadata xml:lang=\"en\"><lido:recordWrap><lido:recordID lido:type=\"doi\">" +
         esc(*s.doi) + "</lido:recordID></lido:recordWrap></lido:administrativeMetadata>\n";
  }
  x += "</lido:lido>";
  return x;
}

std::string document_for(SourceFormat format, const DocFields& doc_fields) {
  switch (format) {
    case SourceFormat::kDataCite:
      return datacite_doc(doc_fields);
    case SourceFormat::kDublinCore:
      return dublin_core_doc(doc_fields);
    case SourceFormat::kMODS:
      return mods_doc(doc_fields);
    case SourceFormat::kMARC:
      return marc_doc(doc_fields);
    case SourceFormat::kLIDO:
      return lido_doc(doc_fields);
  }
  return {};
}

SourceConfig make_source(const std::string& location, Protocol protocol, SourceFormat format) {
  SourceConfig s;
  s.location = location;
  s.protocol = protocol;
  s.format = format;
  s.data_steward = "steward@example.org";
  return s;
}

std::vector<OaiRecord> numbered_oai_records(std::size_t n, SourceFormat format, std::size_t first) {
  std::vector<OaiRecord> out;
  for (std::size_t i = first; i < first + n; ++i) {
    DocFields doc_fields;
    doc_fields.title = "Record " + std::to_string(i);
    doc_fields.creators = {"Author " + std::to_string(i % 7)};
    doc_fields.doi = "10.1234/sim." + std::to_string(i);
    doc_fields.year = 2000 + static_cast<int>(i % 25);
    doc_fields.language = i % 2 ? "en" : "de";
    doc_fields.resource_type = "Dataset";
    doc_fields.subjects = {"simulated"};
    OaiRecord r;
    r.identifier = "oai:sim:" + std::to_string(i);
    r.datestamp = "2024-03-01";
    r.payload = document_for(format, doc_fields);
    out.push_back(std::move(r));
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<GoldenCase> golden_cases() {
  std::vector<GoldenCase> out;
  const std::filesystem::path root = std::filesystem::path(METALAKE_FIXTURE_DIR) / "crosswalk";
  for (SourceFormat format : kAllSourceFormats) {
    const auto dir = root / std::string(to_string(format));
    if (!std::filesystem::is_directory(dir)) continue;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
      if (entry.path().extension() != ".xml") continue;
      auto expected = entry.path();
      expected.replace_extension(".expected.json");
      out.push_back({format, entry.path(), expected});
    }
  }
  std::sort(out.begin(), out.end(), [](const GoldenCase& a, const GoldenCase& b) {
    return a.document < b.document;
  });
  return out;
}

}  // namespace metalake::testing
