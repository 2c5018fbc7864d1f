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

// Pairwise preference annotation records and tasks.

#ifndef PHONAUDIT_ANNOTATION_H_
#define PHONAUDIT_ANNOTATION_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace phonaudit {

// The four options an annotator can pick.
enum class Choice {
  kPreferA,  // TranscriptA > TranscriptB
  kPreferB,  // TranscriptA < TranscriptB
  kTieGood,  // equally good
  kTiePoor,  // equally poor
};

std::string_view ChoiceName(Choice choice);
// Throws Error(kInvalidChoice) for anything but the four names.
Choice ParseChoice(std::string_view name);

struct PreferenceRecord {
  std::string task_id;
  std::string annotator_id;
  Choice choice = Choice::kTieGood;
  // Word indices judged influential in transcript A and in transcript B.
  std::vector<int> influential_words_a;
  std::vector<int> influential_words_b;
  std::vector<std::string> timestamps;
  std::vector<double> playback_speeds;

  bool operator==(const PreferenceRecord&) const = default;
};

// Throws Error(kInvalidChoice) when a tie carries influential words or a word
// index is negative.
void ValidateRecord(const PreferenceRecord& record);

// What the annotator sees. Carries no hint of which side is gold.
struct BlindTask {
  std::string task_id;
  std::string language_code;
  std::string utterance_id;
  std::string audio_path;
  std::string transcript_a;
  std::string transcript_b;

  bool operator==(const BlindTask&) const = default;
};

// A task together with its hidden resolution.
struct AnnotationTask {
  BlindTask view;
  bool a_is_gold = true;
  std::string model_id;
};

// Resolution-key entry, stored apart from the blind tasks.
struct TaskKey {
  std::string task_id;
  bool a_is_gold = true;
  std::string model_id;
};

enum class ResolvedPreference { kGold, kModel, kTieGood, kTiePoor };

ResolvedPreference Resolve(Choice choice, bool a_is_gold);

}  // namespace phonaudit

#endif  // PHONAUDIT_ANNOTATION_H_
