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

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "metalake/http_client.hpp"
#include "metalake/source.hpp"
#include "metalake/xml.hpp"

namespace metalake {

// One record as cut from the wire, before any transformation.
struct ExtractedRecord {
  std::string original_identifier;
  std::string datestamp;
  // Byte-exact record body; empty for deleted OAI-PMH records.
  std::string payload;
  // Namespace bindings of the envelope the payload was cut from.
  xml::NamespaceBindings inherited;
  bool deleted = false;
};

// A record that could not be extracted while the harvest went on.
struct ExtractFailure {
  std::string original_identifier;
  std::string message;
};

using RecordSink = std::function<void(ExtractedRecord)>;
using FailureSink = std::function<void(ExtractFailure)>;
using CursorSink = std::function<void(const std::string&)>;

// HTTP Basic authorization for sources with credentials, else nothing.
HttpHeaders source_auth_headers(const SourceConfig& source);

// ListRecords with metadataPrefix, set and from (YYYY-MM-DD) until the
// resumption token runs empty. `on_cursor` sees every non-empty token.
// noRecordsMatch ends the stream quietly; other OAI-PMH error codes throw
// ProtocolError, HTTP failures TransportError, bad envelopes ParseError.
void harvest_oaipmh(HttpClient& http, const SourceConfig& source,
                    const std::optional<std::string>& since, const RecordSink& sink,
                    const CursorSink& on_cursor = {});

// One GET of the location. A body whose root is in the format namespace is
// one record named after the location; otherwise every child of the root in
// that namespace is a record named location#1, location#2, ...
void fetch_get(HttpClient& http, const SourceConfig& source, const RecordSink& sink);

// ListObjectsV2 over http(s)://host/bucket[/prefix] (path style), then a
// GET per ".xml" key. Listing failures throw; per-object failures go to
// `on_failure`. Requests are SigV4-signed when the source has credentials.
void fetch_s3(HttpClient& http, const SourceConfig& source, const RecordSink& sink,
              const FailureSink& on_failure);

struct AwsSigningKey {
  std::string access_key;
  std::string secret_key;
  std::string region = "us-east-1";
  std::string service = "s3";
};

// Headers (host, x-amz-date, x-amz-content-sha256, authorization) that sign
// an empty-body request with AWS Signature Version 4.
HttpHeaders sign_v4(const AwsSigningKey& key, std::string_view method, const Url& url,
                    std::chrono::system_clock::time_point when);

}  // namespace metalake
