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

// Session store behind the annotation web interface.
//
// Each session walks one annotator through an ordered list of blind tasks.
// The service only ever sees blind tasks; resolution keys stay with the audit
// pipeline. Storage lives under a state directory:
//
//   <id>.session.json    snapshot: annotator, tasks, cursor (atomic rewrite)
//   <id>.records.jsonl   append-only record log, fsync'd before every ack
//
// On restart the log is replayed (last write per task wins) and the cursor is
// placed on the first task without a record.

#ifndef PHONAUDIT_ANNOTATION_SERVICE_H_
#define PHONAUDIT_ANNOTATION_SERVICE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "phonaudit/annotation.h"
#include "phonaudit/corpus_io.h"

namespace phonaudit {

struct TaskView {
  BlindTask task;
  int index = 0;
  int total = 0;
  std::optional<PreferenceRecord> saved;
};

struct SubmitAck {
  int cursor = 0;
  int total = 0;
  bool advanced = false;  // the current task was answered
  bool stored = false;    // false when the record was already stored verbatim
};

struct Progress {
  std::string annotator_id;
  int cursor = 0;
  int total = 0;
  int submitted = 0;
};

struct ByteRange {
  uint64_t first = 0;
  std::optional<uint64_t> last;  // inclusive; open-ended when absent
};

struct AudioSlice {
  std::string bytes;
  uint64_t total_size = 0;
  uint64_t first = 0;
  bool partial = false;
  std::string content_type;
};

class AnnotationService {
 public:
  // Reloads every session found in state_dir. Audio paths in the manifest
  // resolve against audio_root when relative.
  AnnotationService(std::filesystem::path state_dir, DatasetManifest manifest,
                    std::filesystem::path audio_root = {});
  ~AnnotationService();

  AnnotationService(const AnnotationService&) = delete;
  AnnotationService& operator=(const AnnotationService&) = delete;

  // Registers a session. Re-loading an identical task list for an existing
  // session is a no-op; a different list raises Error(kStaleSession).
  void CreateSession(const std::string& session_id,
                     const std::string& annotator_id,
                     std::vector<BlindTask> tasks);

  // Task at the cursor with any saved record. Error(kSessionComplete) when
  // every task has been answered, Error(kNotFound) for an unknown session.
  TaskView GetNextTask(const std::string& session_id) const;
  // Back/forward navigation; index may not pass the cursor.
  TaskView GetTask(const std::string& session_id, int index) const;

  // Persists the record, then acknowledges. Answering the current task
  // advances the cursor; answering an earlier one overwrites its record.
  // Influential word indices must fall inside the shown transcripts.
  // Errors: kInvalidChoice, kUnknownTask, kStaleSession (task ahead of the
  // cursor or another annotator), kNotFound.
  SubmitAck Submit(const std::string& session_id, PreferenceRecord record);

  Progress GetProgress(const std::string& session_id) const;
  // One record per answered task, in task order.
  std::vector<PreferenceRecord> Records(const std::string& session_id) const;
  std::vector<std::string> SessionIds() const;

  // Error(kNotFound) for unknown utterances or missing files; an
  // unsatisfiable range raises Error(kDomainError).
  AudioSlice ReadAudio(const std::string& utterance_id,
                       std::optional<ByteRange> range = std::nullopt) const;
  // Size and content type without the bytes.
  AudioSlice AudioInfo(const std::string& utterance_id) const;

 private:
  struct Session;

  Session& Get(const std::string& session_id) const;
  void LoadSession(const std::filesystem::path& snapshot);
  void WriteSnapshot(const Session& session) const;
  std::filesystem::path SnapshotPath(const std::string& id) const;
  std::filesystem::path LogPath(const std::string& id) const;
  std::filesystem::path AudioPath(const std::string& utterance_id) const;

  std::filesystem::path state_dir_;
  DatasetManifest manifest_;
  std::filesystem::path audio_root_;
  mutable std::shared_mutex sessions_mutex_;
  std::map<std::string, std::unique_ptr<Session>> sessions_;
};

}  // namespace phonaudit

#endif  // PHONAUDIT_ANNOTATION_SERVICE_H_
