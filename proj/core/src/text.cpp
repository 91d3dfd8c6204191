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

#include "metalake/text.hpp"

#include <memory>

#include <unicode/brkiter.h>
#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "metalake/error.hpp"

namespace metalake {

namespace {

const icu::Normalizer2& nfc() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || n == nullptr) {
    throw Error(ErrorCode::kIo, "ICU NFC normalizer unavailable");
  }
  return *n;
}

std::string to_utf8(const icu::UnicodeString& s) {
  std::string out;
  s.toUTF8String(out);
  return out;
}

icu::UnicodeString from_utf8(std::string_view text) {
  return icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
}

bool is_word_char(UChar32 c) {
  return u_isalnum(c) || u_hasBinaryProperty(c, UCHAR_ALPHABETIC) ||
         u_charType(c) == U_NON_SPACING_MARK;
}

}  // namespace

bool is_valid_utf8(std::string_view text) {
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) return false;
  }
  return true;
}

std::string normalize_nfc(std::string_view text) {
  UErrorCode status = U_ZERO_ERROR;
  const auto& n = nfc();
  icu::UnicodeString u = from_utf8(text);
  if (n.isNormalized(u, status) && U_SUCCESS(status)) return to_utf8(u);
  status = U_ZERO_ERROR;
  icu::UnicodeString out = n.normalize(u, status);
  if (U_FAILURE(status)) throw Error(ErrorCode::kInvalidInput, "NFC normalization failed");
  return to_utf8(out);
}

std::string clean_text(std::string_view text) {
  icu::UnicodeString u = from_utf8(text);
  int32_t begin = 0;
  int32_t end = u.length();
  while (begin < end && u_isUWhiteSpace(u.char32At(begin))) {
    begin = u.moveIndex32(begin, 1);
  }
  while (end > begin) {
    const int32_t prev = u.moveIndex32(end, -1);
    if (!u_isUWhiteSpace(u.char32At(prev))) break;
    end = prev;
  }
  icu::UnicodeString trimmed(u, begin, end - begin);
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString out = nfc().normalize(trimmed, status);
  if (U_FAILURE(status)) throw Error(ErrorCode::kInvalidInput, "NFC normalization failed");
  return to_utf8(out);
}

std::string to_lower(std::string_view text) {
  icu::UnicodeString u = from_utf8(text);
  u.toLower(icu::Locale::getRoot());
  return to_utf8(u);
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  if (text.empty()) return tokens;

  icu::UnicodeString u = from_utf8(text);
  UErrorCode status = U_ZERO_ERROR;
  // createWordInstance is comparatively expensive; each thread keeps a clone.
  thread_local std::unique_ptr<icu::BreakIterator> words(
      icu::BreakIterator::createWordInstance(icu::Locale::getRoot(), status));
  if (U_FAILURE(status) || !words) {
    throw Error(ErrorCode::kIo, "ICU word break iterator unavailable");
  }
  words->setText(u);

  int32_t start = words->first();
  for (int32_t end = words->next(); end != icu::BreakIterator::DONE;
       start = end, end = words->next()) {
    bool has_word_char = false;
    for (int32_t i = start; i < end; i = u.moveIndex32(i, 1)) {
      if (is_word_char(u.char32At(i))) {
        has_word_char = true;
        break;
      }
    }
    if (!has_word_char) continue;
    icu::UnicodeString token(u, start, end - start);
    token.toLower(icu::Locale::getRoot());
    status = U_ZERO_ERROR;
    icu::UnicodeString normalized = nfc().normalize(token, status);
    if (U_FAILURE(status)) continue;
    tokens.push_back(to_utf8(normalized));
  }
  return tokens;
}

}  // namespace metalake
