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
#include <string_view>
#include <vector>

namespace metalake {

bool is_valid_utf8(std::string_view text);

// Unicode NFC. Invalid UTF-8 sequences are replaced with U+FFFD.
std::string normalize_nfc(std::string_view text);

// Trims Unicode whitespace at both ends and applies NFC.
std::string clean_text(std::string_view text);

// Unicode-aware lowercase (root locale).
std::string to_lower(std::string_view text);

// Word segmentation per UAX #29; keeps segments containing letters or
// digits, lowercases and NFC-normalizes them. No stemming, no stop words.
std::vector<std::string> tokenize(std::string_view text);

}  // namespace metalake
