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

#include "phonaudit/annotation.h"

#include "phonaudit/errors.h"

namespace phonaudit {

std::string_view ChoiceName(Choice choice) {
  switch (choice) {
    case Choice::kPreferA: return "PreferA";
    case Choice::kPreferB: return "PreferB";
    case Choice::kTieGood: return "TieGood";
    case Choice::kTiePoor: return "TiePoor";
  }
  return "?";
}

Choice ParseChoice(std::string_view name) {
  for (Choice c : {Choice::kPreferA, Choice::kPreferB, Choice::kTieGood,
                   Choice::kTiePoor}) {
    if (ChoiceName(c) == name) return c;
  }
  throw Error(ErrorCode::kInvalidChoice,
              "unknown choice '" + std::string(name) + "'");
}

void ValidateRecord(const PreferenceRecord& record) {
  bool tie = record.choice == Choice::kTieGood ||
             record.choice == Choice::kTiePoor;
  if (tie && (!record.influential_words_a.empty() ||
              !record.influential_words_b.empty())) {
    throw Error(ErrorCode::kInvalidChoice,
                "influential words are only allowed with PreferA or PreferB");
  }
  for (const auto* words :
       {&record.influential_words_a, &record.influential_words_b}) {
    for (int w : *words) {
      if (w < 0) {
        throw Error(ErrorCode::kInvalidChoice, "negative word index");
      }
    }
  }
  if (record.task_id.empty()) {
    throw Error(ErrorCode::kInvalidChoice, "record has no task_id");
  }
}

ResolvedPreference Resolve(Choice choice, bool a_is_gold) {
  switch (choice) {
    case Choice::kPreferA:
      return a_is_gold ? ResolvedPreference::kGold : ResolvedPreference::kModel;
    case Choice::kPreferB:
      return a_is_gold ? ResolvedPreference::kModel : ResolvedPreference::kGold;
    case Choice::kTieGood: return ResolvedPreference::kTieGood;
    case Choice::kTiePoor: return ResolvedPreference::kTiePoor;
  }
  return ResolvedPreference::kTiePoor;
}

}  // namespace phonaudit
