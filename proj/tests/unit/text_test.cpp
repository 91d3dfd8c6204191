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

#include <gtest/gtest.h>

#include "metalake/text.hpp"

namespace metalake {
namespace {

using Tokens = std::vector<std::string>;

TEST(Tokenize, LowercasesAndSplitsOnWordBoundaries) {
  EXPECT_EQ(tokenize("Climate DATA, model-run #2"), (Tokens{"climate", "data", "model", "run", "2"}));
}

TEST(Tokenize, KeepsRepeatsAndNoStopWords) {
  EXPECT_EQ(tokenize("the lake and the river"), (Tokens{"the", "lake", "and", "the", "river"}));
}

TEST(Tokenize, UnicodeAware) {
  EXPECT_EQ(tokenize("ÄRZTE Straße"), (Tokens{"ärzte", "straße"}));
  EXPECT_EQ(tokenize("Ελληνικά κείμενα"), (Tokens{"ελληνικά", "κείμενα"}));
}

TEST(Tokenize, NormalizesToNfc) {
  const std::string decomposed = "cafe\xCC\x81";
  const std::string composed = "caf\xC3\xA9";
  EXPECT_EQ(tokenize(decomposed), Tokens{composed});
}

TEST(Tokenize, PunctuationOnlyGivesNothing) {
  EXPECT_TRUE(tokenize("  -- ,,; ").empty());
  EXPECT_TRUE(tokenize("").empty());
}

TEST(CleanText, TrimsUnicodeWhitespaceAndNormalizes) {
  EXPECT_EQ(clean_text("\xC2\xA0  Alpha \t\n"), "Alpha");
  EXPECT_EQ(clean_text("e\xCC\x81"), "\xC3\xA9");
  EXPECT_EQ(clean_text(" 　 "), "");
}

TEST(Utf8, ValidityAndReplacement) {
  EXPECT_TRUE(is_valid_utf8("plain ascii"));
  EXPECT_TRUE(is_valid_utf8("\xE2\x82\xAC"));
  EXPECT_FALSE(is_valid_utf8("\xC3"));
  EXPECT_FALSE(is_valid_utf8("\xFF\xFE"));
  EXPECT_EQ(normalize_nfc("a\xFF" "b"), "a\xEF\xBF\xBD" "b");
}

TEST(ToLower, RootLocale) { EXPECT_EQ(to_lower("İSTANBUL ÖL"), "i̇stanbul öl"); }

}  // namespace
}  // namespace metalake
