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

// Thin UTF-8 helpers over ICU. Everything downstream of the tokenizer works on
// NFD-normalized UTF-8 std::strings.

#ifndef PHONAUDIT_UNICODE_H_
#define PHONAUDIT_UNICODE_H_

#include <string>
#include <string_view>
#include <vector>

namespace phonaudit::unicode {

// Canonical decomposition. Throws Error(kMalformedInput) on invalid UTF-8.
std::string ToNfd(std::string_view utf8);

std::vector<char32_t> Decode(std::string_view utf8);
std::string Encode(char32_t code_point);
std::string Encode(const std::vector<char32_t>& code_points);

bool IsSpace(char32_t c);

// Tie bars (U+0361 above, U+035C below) join two base symbols into one phone.
bool IsTieBar(char32_t c);

// Codepoints that attach to the preceding base symbol: combining marks
// (Mn/Mc/Me), modifier letters (Lm, e.g. superscripts and length marks),
// modifier symbols (Sk, e.g. tone letters) and the ASCII colon used as a
// length mark. Tie bars are excluded.
bool IsModifier(char32_t c);

// Collapses whitespace runs to one ASCII space and trims both ends, after NFD.
std::string Canonicalize(std::string_view utf8);

}  // namespace phonaudit::unicode

#endif  // PHONAUDIT_UNICODE_H_
