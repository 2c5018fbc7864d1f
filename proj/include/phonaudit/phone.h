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

// Phone segmentation of space-delimited IPA transcripts.
//
// A phone is one base symbol followed by the modifiers attached to it:
// combining marks, superscript modifier letters, length marks and tone
// letters. A tie bar joins the following base symbol into the same phone, so
// affricates such as t͡ʃ stay whole. Modifiers that open a word (stress marks,
// prenasalization) become part of the base of the next phone; ⁿd is one phone
// with base ⁿd.

#ifndef PHONAUDIT_PHONE_H_
#define PHONAUDIT_PHONE_H_

#include <string>
#include <string_view>
#include <vector>

#include "phonaudit/feature_table.h"

namespace phonaudit {

struct Phone {
  std::string surface;  // NFD; always base + diacritics concatenated.
  std::string base;
  std::vector<std::string> diacritics;

  bool operator==(const Phone& other) const { return surface == other.surface; }
};

enum class PhoneCategory {
  kValidPrimary,
  kValidOneDiacritic,
  kValidTwoDiacritics,
  kInvalid,
};

inline constexpr PhoneCategory kAllCategories[] = {
    PhoneCategory::kValidPrimary, PhoneCategory::kValidOneDiacritic,
    PhoneCategory::kValidTwoDiacritics, PhoneCategory::kInvalid};

std::string_view CategoryName(PhoneCategory category);

struct Transcript {
  std::vector<std::vector<Phone>> words;
  std::string language_code;
  std::string utterance_id;

  std::vector<Phone> Flatten() const;
  size_t PhoneCount() const;
};

// Splits raw text on whitespace into words and each word into phones.
// Throws Error(kEmptyTranscript) when there is no phone content.
Transcript Tokenize(std::string_view raw);

// Segments one word (no whitespace) into phones; empty input yields {}.
std::vector<Phone> TokenizeWord(std::string_view word);

// Parses a string that must hold exactly one phone.
Phone ParsePhone(std::string_view text);

// Words joined by single spaces.
std::string Render(const Transcript& transcript);
std::string RenderPhones(const std::vector<Phone>& phones);

// Total: Invalid whenever the surface does not resolve in the table.
PhoneCategory Classify(const Phone& phone, const FeatureTable& table);

}  // namespace phonaudit

#endif  // PHONAUDIT_PHONE_H_
