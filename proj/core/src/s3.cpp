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

#include <algorithm>
#include <ctime>

#include <openssl/evp.h>
#include <openssl/hmac.h>

#include "metalake/error.hpp"
#include "metalake/harvest.hpp"
#include "metalake/text.hpp"

namespace metalake {

namespace {

std::string hex(const unsigned char* data, std::size_t n) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(kHex[data[i] >> 4]);
    out.push_back(kHex[data[i] & 15]);
  }
  return out;
}

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  return hex(md, len);
}

std::string hmac_sha256(std::string_view key, std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()),
       reinterpret_cast<const unsigned char*>(data.data()), data.size(), md, &len);
  return std::string(reinterpret_cast<const char*>(md), len);
}

std::string canonical_query(std::string_view query) {
  std::vector<std::pair<std::string, std::string>> pairs;
  while (!query.empty()) {
    const auto amp = query.find('&');
    std::string_view part = query.substr(0, amp);
    query = amp == std::string_view::npos ? std::string_view{} : query.substr(amp + 1);
    if (part.empty()) continue;
    const auto eq = part.find('=');
    pairs.emplace_back(std::string(part.substr(0, eq)),
                       eq == std::string_view::npos ? std::string{} : std::string(part.substr(eq + 1)));
  }
  std::sort(pairs.begin(), pairs.end());
  std::string out;
  for (const auto& [k, v] : pairs) {
    if (!out.empty()) out.push_back('&');
    out += k + "=" + v;
  }
  return out;
}

std::string host_header(const Url& url) {
  const std::string origin = url.origin();
  return origin.substr(origin.find("://") + 3);
}

struct BucketLocation {
  Url endpoint;
  std::string bucket;
  std::string prefix;
};

BucketLocation split_location(const std::string& location) {
  Url url = Url::parse(location);
  std::string_view path = url.path;
  path.remove_prefix(1);
  const auto slash = path.find('/');
  BucketLocation out;
  out.bucket = percent_decode(path.substr(0, slash));
  if (slash != std::string_view::npos) out.prefix = percent_decode(path.substr(slash + 1));
  if (out.bucket.empty()) {
    throw Error(ErrorCode::kInvalidInput, "S3 location '" + location + "' names no bucket");
  }
  url.path = "/";
  url.query.clear();
  out.endpoint = std::move(url);
  return out;
}

}  // namespace

HttpHeaders sign_v4(const AwsSigningKey& key, std::string_view method, const Url& url,
                    std::chrono::system_clock::time_point when) {
  const std::time_t t = std::chrono::system_clock::to_time_t(when);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char amz_date[17];
  std::strftime(amz_date, sizeof amz_date, "%Y%m%dT%H%M%SZ", &tm);
  const std::string date(amz_date, 8);

  const std::string host = host_header(url);
  const std::string payload_hash = sha256_hex("");
  const std::string signed_headers = "host;x-amz-content-sha256;x-amz-date";
  const std::string canonical_request =
      std::string(method) + "\n" + url.path + "\n" + canonical_query(url.query) + "\n" +
      "host:" + host + "\n" + "x-amz-content-sha256:" + payload_hash + "\n" +
      "x-amz-date:" + amz_date + "\n\n" + signed_headers + "\n" + payload_hash;

  const std::string scope = date + "/" + key.region + "/" + key.service + "/aws4_request";
  const std::string string_to_sign = std::string("AWS4-HMAC-SHA256\n") + amz_date + "\n" +
                                     scope + "\n" + sha256_hex(canonical_request);

  std::string signing_key = hmac_sha256("AWS4" + key.secret_key, date);
  signing_key = hmac_sha256(signing_key, key.region);
  signing_key = hmac_sha256(signing_key, key.service);
  signing_key = hmac_sha256(signing_key, "aws4_request");
  const std::string mac = hmac_sha256(signing_key, string_to_sign);
  const std::string signature =
      hex(reinterpret_cast<const unsigned char*>(mac.data()), mac.size());

  return {{"host", host},
          {"x-amz-date", amz_date},
          {"x-amz-content-sha256", payload_hash},
          {"authorization", "AWS4-HMAC-SHA256 Credential=" + key.access_key + "/" + scope +
                                ", SignedHeaders=" + signed_headers +
                                ", Signature=" + signature}};
}

void fetch_s3(HttpClient& http, const SourceConfig& source, const RecordSink& sink,
              const FailureSink& on_failure) {
  const BucketLocation where = split_location(source.location);
  std::optional<AwsSigningKey> key;
  if (source.credentials) {
    key = AwsSigningKey{source.credentials->username, source.credentials->password};
  }
  auto request = [&](const Url& url) {
    HttpHeaders headers;
    if (key) headers = sign_v4(*key, "GET", url, std::chrono::system_clock::now());
    return http.get(url, headers);
  };
  const std::string bucket_path = "/" + percent_encode(where.bucket);

  std::vector<std::string> keys;
  std::string continuation;
  for (;;) {
    QueryParams params = {{"list-type", "2"}};
    if (!where.prefix.empty()) params.emplace_back("prefix", where.prefix);
    if (!continuation.empty()) params.emplace_back("continuation-token", continuation);
    Url url = where.endpoint;
    url.path = bucket_path;
    url.query = build_query(params);

    HttpResponse response = request(url);
    if (!response.ok()) {
      throw TransportError(response.status, "ListObjectsV2 " + url.str() + " returned HTTP " +
                                                std::to_string(response.status));
    }
    const xml::Document doc = xml::parse(response.body);
    const xml::Element& root = doc.root;
    if (root.local_name != "ListBucketResult") {
      throw ParseError("malformed ListObjectsV2 response: root is " + root.local_name, 1, 1);
    }
    const std::string_view ns = root.ns_uri;
    for (const xml::Element* contents : root.children_named(ns, "Contents")) {
      if (const auto* k = contents->child(ns, "Key")) keys.push_back(k->text());
    }
    const auto* truncated = root.child(ns, "IsTruncated");
    const auto* next = root.child(ns, "NextContinuationToken");
    if (truncated == nullptr || clean_text(truncated->text()) != "true") break;
    if (next == nullptr || next->text().empty()) {
      throw ParseError("truncated ListObjectsV2 response without NextContinuationToken", 1, 1);
    }
    if (next->text() == continuation) {
      throw ProtocolError("RepeatedContinuationToken", "continuation token repeated");
    }
    continuation = next->text();
  }

  for (const std::string& object_key : keys) {
    if (object_key.size() < 4 || object_key.compare(object_key.size() - 4, 4, ".xml") != 0) {
      continue;
    }
    Url url = where.endpoint;
    url.path = bucket_path + "/" + percent_encode(object_key, true);
    try {
      HttpResponse response = request(url);
      if (!response.ok()) {
        throw TransportError(response.status,
                             "GET " + url.str() + " returned HTTP " + std::to_string(response.status));
      }
      ExtractedRecord out;
      out.original_identifier = object_key;
      out.payload = std::move(response.body);
      sink(std::move(out));
    } catch (const TransportError& e) {
      on_failure({object_key, e.what()});
    }
  }
}

}  // namespace metalake
