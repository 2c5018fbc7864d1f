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

#include "phonaudit/unicode.h"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "phonaudit/errors.h"

namespace phonaudit::unicode {

std::vector<char32_t> Decode(std::string_view utf8) {
  std::vector<char32_t> out;
  out.reserve(utf8.size());
  const auto* bytes = reinterpret_cast<const uint8_t*>(utf8.data());
  const int32_t length = static_cast<int32_t>(utf8.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    if (c < 0) {
      throw Error(ErrorCode::kMalformedInput,
                  "invalid UTF-8 at byte " + std::to_string(i - 1));
    }
    out.push_back(static_cast<char32_t>(c));
  }
  return out;
}

std::string Encode(char32_t code_point) {
  std::string out;
  uint8_t buf[U8_MAX_LENGTH];
  int32_t len = 0;
  UBool error = false;
  U8_APPEND(buf, len, U8_MAX_LENGTH, static_cast<UChar32>(code_point), error);
  if (error) {
    throw Error(ErrorCode::kMalformedInput, "unencodable code point");
  }
  out.assign(reinterpret_cast<const char*>(buf), len);
  return out;
}

std::string Encode(const std::vector<char32_t>& code_points) {
  std::string out;
  for (char32_t c : code_points) out += Encode(c);
  return out;
}

std::string ToNfd(std::string_view utf8) {
  // Validate first; ICU's fromUTF8 silently substitutes U+FFFD.
  Decode(utf8);
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfd = icu::Normalizer2::getNFDInstance(status);
  if (U_FAILURE(status)) {
    throw Error(ErrorCode::kIoError, "ICU NFD normalizer unavailable");
  }
  icu::UnicodeString source = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  icu::UnicodeString normalized = nfd->normalize(source, status);
  if (U_FAILURE(status)) {
    throw Error(ErrorCode::kMalformedInput, "NFD normalization failed");
  }
  std::string out;
  normalized.toUTF8String(out);
  return out;
}

bool IsSpace(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)); }

bool IsTieBar(char32_t c) { return c == 0x0361 || c == 0x035C; }

bool IsModifier(char32_t c) {
  if (IsTieBar(c)) return false;
  if (c == U':') return true;
  switch (u_charType(static_cast<UChar32>(c))) {
    case U_NON_SPACING_MARK:
    case U_COMBINING_SPACING_MARK:
    case U_ENCLOSING_MARK:
    case U_MODIFIER_LETTER:
    case U_MODIFIER_SYMBOL:
      return true;
    default:
      return false;
  }
}

std::string Canonicalize(std::string_view utf8) {
  std::string out;
  bool pending_space = false;
  for (char32_t c : Decode(ToNfd(utf8))) {
    if (IsSpace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out += ' ';
      pending_space = false;
    }
    out += Encode(c);
  }
  return out;
}

}  // namespace phonaudit::unicode
