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

// JSONL corpora and annotation files.
//
//   manifest        {utterance_id, language, audio, gold, duration_s}
//   model outputs   {utterance_id, model_id, transcript}
//   tasks (blind)   {task_id, language, utterance_id, audio, transcript_a,
//                    transcript_b}
//   resolution key  {task_id, a_is_gold, model_id}
//   records         {task_id, annotator_id, choice,
//                    influential_words: {a: [...], b: [...]},
//                    timestamps: [...], playback_speeds: [...]}

#ifndef PHONAUDIT_CORPUS_IO_H_
#define PHONAUDIT_CORPUS_IO_H_

#include <filesystem>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "phonaudit/annotation.h"
#include "phonaudit/ppt_stats.h"

namespace phonaudit {

struct ManifestEntry {
  std::string utterance_id;
  std::string language_code;
  std::string audio_path;
  std::string gold;
  double duration_s = 0.0;
};

// Entries keep file order. Construction rejects duplicate ids, empty language
// codes and non-positive durations with Error(kMalformedInput).
class DatasetManifest {
 public:
  DatasetManifest() = default;
  explicit DatasetManifest(std::vector<ManifestEntry> entries);

  static DatasetManifest ReadJsonl(std::istream& in,
                                   const std::string& origin = "<manifest>");
  static DatasetManifest Load(const std::filesystem::path& path);
  void WriteJsonl(std::ostream& out) const;

  const std::vector<ManifestEntry>& entries() const { return entries_; }
  const ManifestEntry* Find(std::string_view utterance_id) const;
  // Sorted language codes.
  std::vector<std::string> languages() const;
  // Entries of one language, in file order.
  std::vector<const ManifestEntry*> ForLanguage(std::string_view language) const;
  std::map<std::string, int> CountsByLanguage() const;
  size_t size() const { return entries_.size(); }

 private:
  std::vector<ManifestEntry> entries_;
  std::map<std::string, size_t, std::less<>> by_id_;
  std::map<std::string, std::vector<size_t>, std::less<>> by_language_;
};

struct ModelTranscriptSet {
  std::string model_id;
  std::map<std::string, std::string> transcripts;  // utterance_id -> text
};

// One file may mix several models; returns them keyed by model_id.
std::map<std::string, ModelTranscriptSet> ReadModelTranscripts(
    std::istream& in, const std::string& origin = "<predictions>");
std::map<std::string, ModelTranscriptSet> LoadModelTranscripts(
    const std::filesystem::path& path);
void WriteModelTranscripts(std::ostream& out, const ModelTranscriptSet& set);

// Calls fn(json, line_number) per nonblank line. Malformed JSON raises
// Error(kMalformedInput) naming origin and line.
void ForEachJsonLine(std::istream& in, const std::string& origin,
                     const std::function<void(const nlohmann::json&, int)>& fn);

nlohmann::json ToJson(const BlindTask& task);
BlindTask BlindTaskFromJson(const nlohmann::json& j);
nlohmann::json ToJson(const TaskKey& key);
TaskKey TaskKeyFromJson(const nlohmann::json& j);
nlohmann::json ToJson(const PreferenceRecord& record);
// Validates with ValidateRecord().
PreferenceRecord RecordFromJson(const nlohmann::json& j);
nlohmann::json ToJson(const TestConfig& config);
TestConfig TestConfigFromJson(const nlohmann::json& j,
                              TestConfig defaults = {});
nlohmann::json ToJson(const Verdict& verdict);

std::vector<BlindTask> ReadTasks(std::istream& in);
std::vector<TaskKey> ReadKeys(std::istream& in);
std::vector<PreferenceRecord> ReadRecords(std::istream& in);
std::vector<BlindTask> LoadTasks(const std::filesystem::path& path);
std::vector<TaskKey> LoadKeys(const std::filesystem::path& path);
std::vector<PreferenceRecord> LoadRecords(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it over path.
void WriteFileAtomic(const std::filesystem::path& path,
                     std::string_view contents);
std::string ReadFile(const std::filesystem::path& path);

}  // namespace phonaudit

#endif  // PHONAUDIT_CORPUS_IO_H_
