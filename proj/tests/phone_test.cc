// Copyright 2026 The Phonaudit Authors.
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

#include "phonaudit/phone.h"

#include <gtest/gtest.h>

#include "phonaudit/unicode.h"
#include "test_util.h"

namespace phonaudit {
namespace {

using testing::Surfaces;
using testing::Table;

struct Segmentation {
  const char* input;
  std::vector<std::vector<std::string>> words;
};

// Expected phones written by hand from the attachment rules.
const Segmentation kFixtures[] = {
    {"pa", {{"p", "a"}}},
    {"tuflaI", {{"t", "u", "f", "l", "a", "I"}}},
    {"t͡ʃa", {{"t͡ʃ", "a"}}},
    {"d͡ʒi", {{"d͡ʒ", "i"}}},
    {"k͜pa", {{"k͜p", "a"}}},
    {"kʰa", {{"kʰ", "a"}}},
    {"kʰʲo", {{"kʰʲ", "o"}}},
    {"aː", {{"aː"}}},
    {"a:", {{"a:"}}},
    {"ã", {{"ã"}}},
    {"ɑ̃ːn", {{"ɑ̃ː", "n"}}},
    {"n̩", {{"n̩"}}},
    {"e̞", {{"e̞"}}},
    {"tʲʷa", {{"tʲʷ", "a"}}},
    {"tˤˤa", {{"tˤˤ", "a"}}},
    {"ʔaʔ", {{"ʔ", "a", "ʔ"}}},
    {"ǁaǀoǃ", {{"ǁ", "a", "ǀ", "o", "ǃ"}}},
    {"ˈpa", {{"ˈp", "a"}}},
    {"ⁿda", {{"ⁿd", "a"}}},
    {"ː", {{"ː"}}},
    {"aⁿda", {{"aⁿ", "d", "a"}}},
    {"pa ta", {{"p", "a"}, {"t", "a"}}},
    {"  pa \t  ta  ", {{"p", "a"}, {"t", "a"}}},
    {"ɡ g", {{"ɡ"}, {"g"}}},
    {"ʃʃ", {{"ʃ", "ʃ"}}},
    {"ŋ͡m", {{"ŋ͡m"}}},
    {"pʰaːt", {{"pʰ", "aː", "t"}}},
    {"ɪ I", {{"ɪ"}, {"I"}}},
    {"e:", {{"e:"}}},
    {"ɦa ɲa ɟa", {{"ɦ", "a"}, {"ɲ", "a"}, {"ɟ", "a"}}},
    {"t͡ʃʰ", {{"t͡ʃʰ"}}},
    {"χʷ ʁ", {{"χʷ"}, {"ʁ"}}},
};

TEST(TokenizeTest, Fixtures) {
  for (const Segmentation& f : kFixtures) {
    Transcript t = Tokenize(f.input);
    ASSERT_EQ(t.words.size(), f.words.size()) << f.input;
    for (size_t w = 0; w < f.words.size(); ++w) {
      std::vector<std::string> want;
      for (const std::string& s : f.words[w]) {
        want.push_back(unicode::ToNfd(s));
      }
      EXPECT_EQ(Surfaces(t.words[w]), want) << f.input;
    }
  }
}

TEST(TokenizeTest, RenderRoundTrip) {
  for (const Segmentation& f : kFixtures) {
    Transcript t = Tokenize(f.input);
    std::string rendered = Render(t);
    EXPECT_EQ(rendered, unicode::Canonicalize(f.input));
    Transcript again = Tokenize(rendered);
    EXPECT_EQ(Surfaces(again.Flatten()), Surfaces(t.Flatten())) << f.input;
    EXPECT_EQ(again.words.size(), t.words.size());
  }
}

TEST(TokenizeTest, BaseAndDiacritics) {
  Phone p = ParsePhone("kʰʲ");
  EXPECT_EQ(p.base, "k");
  EXPECT_EQ(p.diacritics, (std::vector<std::string>{"ʰ", "ʲ"}));
  Phone tie = ParsePhone("t͡ʃʰ");
  EXPECT_EQ(tie.base, "t͡ʃ");
  EXPECT_EQ(tie.diacritics, (std::vector<std::string>{"ʰ"}));
  Phone prenasal = ParsePhone("ⁿd");
  EXPECT_EQ(prenasal.base, "ⁿd");
  EXPECT_TRUE(prenasal.diacritics.empty());
  Phone nasal = ParsePhone("ã");
  EXPECT_EQ(nasal.base, "a");
  EXPECT_EQ(nasal.diacritics, (std::vector<std::string>{"̃"}));
}

TEST(TokenizeTest, Errors) {
  EXPECT_ERROR_CODE(Tokenize(""), ErrorCode::kEmptyTranscript);
  EXPECT_ERROR_CODE(Tokenize(" \t\n"), ErrorCode::kEmptyTranscript);
  EXPECT_ERROR_CODE(Tokenize("p\xff"), ErrorCode::kMalformedInput);
  EXPECT_ERROR_CODE(ParsePhone("pa"), ErrorCode::kMalformedInput);
  EXPECT_ERROR_CODE(ParsePhone(""), ErrorCode::kMalformedInput);
}

TEST(TokenizeTest, PhoneCountAndFlatten) {
  Transcript t = Tokenize("pa tʰa ǃ");
  EXPECT_EQ(t.PhoneCount(), 5u);
  EXPECT_EQ(Surfaces(t.Flatten()),
            (std::vector<std::string>{"p", "a", "tʰ", "a", "ǃ"}));
}

TEST(ClassifyTest, Categories) {
  struct Case {
    const char* phone;
    PhoneCategory want;
  } cases[] = {
      {"p", PhoneCategory::kValidPrimary},
      {"ɡ", PhoneCategory::kValidPrimary},
      {"t͡ʃ", PhoneCategory::kValidPrimary},
      {"ǁ", PhoneCategory::kValidPrimary},
      {"ǀ", PhoneCategory::kValidPrimary},
      {"ǃ", PhoneCategory::kValidPrimary},
      {"kʰ", PhoneCategory::kValidOneDiacritic},
      {"tˤ", PhoneCategory::kValidOneDiacritic},
      {"eː", PhoneCategory::kValidOneDiacritic},
      {"kʰʲ", PhoneCategory::kValidTwoDiacritics},
      {"ɑ̃ː", PhoneCategory::kValidTwoDiacritics},
      {"g", PhoneCategory::kInvalid},
      {"tˤˤ", PhoneCategory::kInvalid},
      {"e:", PhoneCategory::kInvalid},
      {"I", PhoneCategory::kInvalid},
      {"zʰ", PhoneCategory::kInvalid},
  };
  for (const Case& c : cases) {
    EXPECT_EQ(Classify(ParsePhone(c.phone), Table()), c.want) << c.phone;
  }
}

TEST(ClassifyTest, CategoryNames) {
  EXPECT_EQ(CategoryName(PhoneCategory::kValidPrimary), "valid_primary");
  EXPECT_EQ(CategoryName(PhoneCategory::kValidOneDiacritic),
            "valid_one_diacritic");
  EXPECT_EQ(CategoryName(PhoneCategory::kValidTwoDiacritics),
            "valid_two_diacritics");
  EXPECT_EQ(CategoryName(PhoneCategory::kInvalid), "invalid");
}

}  // namespace
}  // namespace phonaudit
