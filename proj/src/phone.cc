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

#include "phonaudit/errors.h"
#include "phonaudit/unicode.h"

namespace phonaudit {
namespace {

// Accumulates the code points of one phone while tracking where the base
// (including tie-barred continuations) ends.
class PhoneBuilder {
 public:
  bool empty() const { return code_points_.empty(); }

  void AddBase(char32_t c) {
    code_points_.push_back(c);
    base_end_ = code_points_.size();
  }

  void AddModifier(char32_t c) { code_points_.push_back(c); }

  Phone Build() const {
    Phone phone;
    for (size_t i = 0; i < code_points_.size(); ++i) {
      std::string piece = unicode::Encode(code_points_[i]);
      if (i < base_end_) {
        phone.base += piece;
      } else {
        phone.diacritics.push_back(piece);
      }
      phone.surface += piece;
    }
    return phone;
  }

 private:
  std::vector<char32_t> code_points_;
  size_t base_end_ = 0;
};

std::vector<Phone> SegmentWord(const std::vector<char32_t>& word) {
  std::vector<Phone> phones;
  PhoneBuilder current;
  bool join_next = false;
  auto flush = [&] {
    if (!current.empty()) phones.push_back(current.Build());
    current = PhoneBuilder();
    join_next = false;
  };
  for (char32_t c : word) {
    if (unicode::IsTieBar(c)) {
      // Part of the base: the tie bar belongs to the affricate, not to the
      // diacritic list.
      current.AddBase(c);
      join_next = true;
    } else if (unicode::IsModifier(c)) {
      if (current.empty() || join_next) {
        // Word-initial modifiers (stress, prenasalization) prefix the next
        // base, as lingpy does.
        current.AddBase(c);
        join_next = true;
      } else {
        current.AddModifier(c);
      }
    } else if (join_next) {
      current.AddBase(c);
      join_next = false;
    } else {
      flush();
      current.AddBase(c);
    }
  }
  flush();
  return phones;
}

}  // namespace

std::string_view CategoryName(PhoneCategory category) {
  switch (category) {
    case PhoneCategory::kValidPrimary: return "valid_primary";
    case PhoneCategory::kValidOneDiacritic: return "valid_one_diacritic";
    case PhoneCategory::kValidTwoDiacritics: return "valid_two_diacritics";
    case PhoneCategory::kInvalid: return "invalid";
  }
  return "invalid";
}

std::vector<Phone> Transcript::Flatten() const {
  std::vector<Phone> flat;
  flat.reserve(PhoneCount());
  for (const auto& word : words) flat.insert(flat.end(), word.begin(), word.end());
  return flat;
}

size_t Transcript::PhoneCount() const {
  size_t n = 0;
  for (const auto& word : words) n += word.size();
  return n;
}

std::vector<Phone> TokenizeWord(std::string_view word) {
  return SegmentWord(unicode::Decode(unicode::ToNfd(word)));
}

Transcript Tokenize(std::string_view raw) {
  Transcript transcript;
  std::vector<char32_t> word;
  auto close_word = [&] {
    if (word.empty()) return;
    transcript.words.push_back(SegmentWord(word));
    word.clear();
  };
  for (char32_t c : unicode::Decode(unicode::ToNfd(raw))) {
    if (unicode::IsSpace(c)) {
      close_word();
    } else {
      word.push_back(c);
    }
  }
  close_word();
  if (transcript.words.empty()) {
    throw Error(ErrorCode::kEmptyTranscript, "transcript has no phones");
  }
  return transcript;
}

Phone ParsePhone(std::string_view text) {
  std::vector<Phone> phones = TokenizeWord(text);
  if (phones.size() != 1) {
    throw Error(ErrorCode::kMalformedInput,
                "'" + std::string(text) + "' is not a single phone (" +
                    std::to_string(phones.size()) + " segments)");
  }
  return phones.front();
}

std::string RenderPhones(const std::vector<Phone>& phones) {
  std::string out;
  for (const auto& phone : phones) out += phone.surface;
  return out;
}

std::string Render(const Transcript& transcript) {
  std::string out;
  for (const auto& word : transcript.words) {
    if (!out.empty()) out += ' ';
    out += RenderPhones(word);
  }
  return out;
}

PhoneCategory Classify(const Phone& phone, const FeatureTable& table) {
  if (!table.Contains(phone.surface)) return PhoneCategory::kInvalid;
  switch (phone.diacritics.size()) {
    case 0: return PhoneCategory::kValidPrimary;
    case 1: return PhoneCategory::kValidOneDiacritic;
    default: return PhoneCategory::kValidTwoDiacritics;
  }
}

}  // namespace phonaudit
