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

#include "phonaudit/annotation_service.h"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "phonaudit/errors.h"

namespace phonaudit {

using nlohmann::json;

namespace {

void CheckSessionId(const std::string& id) {
  bool ok = !id.empty() && id.size() <= 128 && id[0] != '.';
  for (char c : id) {
    ok = ok && (std::isalnum(static_cast<unsigned char>(c)) || c == '-' ||
                c == '_' || c == '.');
  }
  if (!ok) {
    throw Error(ErrorCode::kMalformedInput,
                "session id must match [A-Za-z0-9._-]+: '" + id + "'");
  }
}

std::string ContentType(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (ext == ".wav") return "audio/wav";
  if (ext == ".flac") return "audio/flac";
  if (ext == ".mp3") return "audio/mpeg";
  if (ext == ".ogg" || ext == ".opus") return "audio/ogg";
  if (ext == ".m4a") return "audio/mp4";
  return "application/octet-stream";
}

// Appends one line and forces it to stable storage.
void AppendDurably(const std::filesystem::path& path, const std::string& line) {
  int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd < 0) {
    throw Error(ErrorCode::kIoError,
                "cannot open " + path.string() + ": " + std::strerror(errno));
  }
  const char* data = line.data();
  size_t left = line.size();
  while (left > 0) {
    ssize_t n = ::write(fd, data, left);
    if (n < 0) {
      if (errno == EINTR) continue;
      int err = errno;
      ::close(fd);
      throw Error(ErrorCode::kIoError,
                  "write to " + path.string() + ": " + std::strerror(err));
    }
    data += n;
    left -= static_cast<size_t>(n);
  }
  int rc = ::fsync(fd);
  ::close(fd);
  if (rc != 0) {
    throw Error(ErrorCode::kIoError, "fsync " + path.string() + " failed");
  }
}

int WordCount(const std::string& text) {
  std::istringstream in(text);
  int n = 0;
  for (std::string word; in >> word;) ++n;
  return n;
}

void CheckWordIndices(const std::vector<int>& words, const std::string& text,
                      char side) {
  const int n = WordCount(text);
  for (int w : words) {
    if (w >= n) {
      throw Error(ErrorCode::kInvalidChoice,
                  std::string("word index ") + std::to_string(w) +
                      " is past transcript " + side + " (" +
                      std::to_string(n) + " words)");
    }
  }
}

}  // namespace

struct AnnotationService::Session {
  std::string id;
  std::string annotator_id;
  std::vector<BlindTask> tasks;
  std::map<std::string, int> index;
  std::vector<std::optional<PreferenceRecord>> records;
  int cursor = 0;
  mutable std::mutex mutex;

  int FirstUnanswered() const {
    int i = 0;
    while (i < static_cast<int>(records.size()) && records[i]) ++i;
    return i;
  }

  TaskView View(int i) const {
    TaskView view;
    view.task = tasks[i];
    view.index = i;
    view.total = static_cast<int>(tasks.size());
    view.saved = records[i];
    return view;
  }
};

AnnotationService::AnnotationService(std::filesystem::path state_dir,
                                     DatasetManifest manifest,
                                     std::filesystem::path audio_root)
    : state_dir_(std::move(state_dir)),
      manifest_(std::move(manifest)),
      audio_root_(std::move(audio_root)) {
  std::filesystem::create_directories(state_dir_);
  std::vector<std::filesystem::path> snapshots;
  for (const auto& entry : std::filesystem::directory_iterator(state_dir_)) {
    const std::string name = entry.path().filename().string();
    if (name.size() > 13 && name.ends_with(".session.json")) {
      snapshots.push_back(entry.path());
    }
  }
  std::sort(snapshots.begin(), snapshots.end());
  for (const auto& path : snapshots) LoadSession(path);
}

AnnotationService::~AnnotationService() = default;

std::filesystem::path AnnotationService::SnapshotPath(
    const std::string& id) const {
  return state_dir_ / (id + ".session.json");
}

std::filesystem::path AnnotationService::LogPath(const std::string& id) const {
  return state_dir_ / (id + ".records.jsonl");
}

void AnnotationService::LoadSession(const std::filesystem::path& snapshot) {
  json j = json::parse(ReadFile(snapshot));
  auto session = std::make_unique<Session>();
  session->id = j.at("session_id").get<std::string>();
  session->annotator_id = j.at("annotator_id").get<std::string>();
  for (const json& t : j.at("tasks")) {
    session->index[t.at("task_id").get<std::string>()] =
        static_cast<int>(session->tasks.size());
    session->tasks.push_back(BlindTaskFromJson(t));
  }
  session->records.resize(session->tasks.size());
  if (std::filesystem::exists(LogPath(session->id))) {
    std::ifstream in(LogPath(session->id));
    ForEachJsonLine(in, LogPath(session->id).string(),
                    [&](const json& line, int) {
                      PreferenceRecord r = RecordFromJson(line);
                      auto it = session->index.find(r.task_id);
                      if (it != session->index.end()) {
                        session->records[it->second] = std::move(r);
                      }
                    });
  }
  session->cursor = session->FirstUnanswered();
  std::unique_lock lock(sessions_mutex_);
  std::string id = session->id;
  sessions_[id] = std::move(session);
}

void AnnotationService::WriteSnapshot(const Session& session) const {
  json tasks = json::array();
  for (const BlindTask& t : session.tasks) tasks.push_back(ToJson(t));
  json j = {{"session_id", session.id},
            {"annotator_id", session.annotator_id},
            {"cursor", session.cursor},
            {"tasks", tasks}};
  WriteFileAtomic(SnapshotPath(session.id), j.dump(1) + "\n");
}

void AnnotationService::CreateSession(const std::string& session_id,
                                      const std::string& annotator_id,
                                      std::vector<BlindTask> tasks) {
  CheckSessionId(session_id);
  if (annotator_id.empty()) {
    throw Error(ErrorCode::kMalformedInput, "annotator_id is required");
  }
  if (tasks.empty()) {
    throw Error(ErrorCode::kMalformedInput, "campaign has no tasks");
  }
  auto session = std::make_unique<Session>();
  session->id = session_id;
  session->annotator_id = annotator_id;
  for (const BlindTask& t : tasks) {
    if (!session->index.emplace(t.task_id, session->tasks.size()).second) {
      throw Error(ErrorCode::kMalformedInput,
                  "duplicate task '" + t.task_id + "'");
    }
    session->tasks.push_back(t);
  }
  session->records.resize(session->tasks.size());

  std::unique_lock lock(sessions_mutex_);
  if (auto it = sessions_.find(session_id); it != sessions_.end()) {
    const Session& existing = *it->second;
    if (existing.tasks == session->tasks &&
        existing.annotator_id == annotator_id) {
      return;
    }
    throw Error(ErrorCode::kStaleSession,
                "session '" + session_id + "' exists with different tasks");
  }
  WriteSnapshot(*session);
  sessions_[session_id] = std::move(session);
}

AnnotationService::Session& AnnotationService::Get(
    const std::string& session_id) const {
  std::shared_lock lock(sessions_mutex_);
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) {
    throw Error(ErrorCode::kNotFound, "no session '" + session_id + "'");
  }
  return *it->second;
}

TaskView AnnotationService::GetNextTask(const std::string& session_id) const {
  Session& s = Get(session_id);
  std::lock_guard lock(s.mutex);
  if (s.cursor >= static_cast<int>(s.tasks.size())) {
    throw Error(ErrorCode::kSessionComplete,
                "session '" + session_id + "' is complete");
  }
  return s.View(s.cursor);
}

TaskView AnnotationService::GetTask(const std::string& session_id,
                                    int index) const {
  Session& s = Get(session_id);
  std::lock_guard lock(s.mutex);
  if (index < 0 || index >= static_cast<int>(s.tasks.size())) {
    throw Error(ErrorCode::kNotFound, "task index out of range");
  }
  if (index > s.cursor) {
    throw Error(ErrorCode::kStaleSession,
                "task " + std::to_string(index) + " is ahead of the cursor");
  }
  return s.View(index);
}

SubmitAck AnnotationService::Submit(const std::string& session_id,
                                    PreferenceRecord record) {
  Session& s = Get(session_id);
  std::lock_guard lock(s.mutex);
  if (record.annotator_id.empty()) record.annotator_id = s.annotator_id;
  ValidateRecord(record);
  if (record.annotator_id != s.annotator_id) {
    throw Error(ErrorCode::kStaleSession,
                "session '" + session_id + "' belongs to " + s.annotator_id);
  }
  auto it = s.index.find(record.task_id);
  if (it == s.index.end()) {
    throw Error(ErrorCode::kUnknownTask,
                "task '" + record.task_id + "' is not in this session");
  }
  const int i = it->second;
  CheckWordIndices(record.influential_words_a, s.tasks[i].transcript_a, 'A');
  CheckWordIndices(record.influential_words_b, s.tasks[i].transcript_b, 'B');
  if (i > s.cursor) {
    throw Error(ErrorCode::kStaleSession,
                "task '" + record.task_id + "' has not been reached yet");
  }

  SubmitAck ack;
  ack.total = static_cast<int>(s.tasks.size());
  if (s.records[i] && *s.records[i] == record) {
    ack.cursor = s.cursor;
    return ack;
  }
  AppendDurably(LogPath(s.id), ToJson(record).dump() + "\n");
  s.records[i] = std::move(record);
  ack.stored = true;
  if (i == s.cursor) {
    s.cursor = s.FirstUnanswered();
    ack.advanced = true;
    WriteSnapshot(s);
  }
  ack.cursor = s.cursor;
  return ack;
}

Progress AnnotationService::GetProgress(const std::string& session_id) const {
  Session& s = Get(session_id);
  std::lock_guard lock(s.mutex);
  Progress p;
  p.annotator_id = s.annotator_id;
  p.cursor = s.cursor;
  p.total = static_cast<int>(s.tasks.size());
  p.submitted = static_cast<int>(
      std::count_if(s.records.begin(), s.records.end(),
                    [](const auto& r) { return r.has_value(); }));
  return p;
}

std::vector<PreferenceRecord> AnnotationService::Records(
    const std::string& session_id) const {
  Session& s = Get(session_id);
  std::lock_guard lock(s.mutex);
  std::vector<PreferenceRecord> out;
  for (const auto& r : s.records) {
    if (r) out.push_back(*r);
  }
  return out;
}

std::vector<std::string> AnnotationService::SessionIds() const {
  std::shared_lock lock(sessions_mutex_);
  std::vector<std::string> out;
  for (const auto& [id, s] : sessions_) out.push_back(id);
  return out;
}

std::filesystem::path AnnotationService::AudioPath(
    const std::string& utterance_id) const {
  const ManifestEntry* entry = manifest_.Find(utterance_id);
  if (entry == nullptr || entry->audio_path.empty()) {
    throw Error(ErrorCode::kNotFound, "no audio for '" + utterance_id + "'");
  }
  std::filesystem::path path = entry->audio_path;
  if (path.is_relative() && !audio_root_.empty()) path = audio_root_ / path;
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorCode::kNotFound, "audio file missing: " + path.string());
  }
  return path;
}

AudioSlice AnnotationService::AudioInfo(const std::string& utterance_id) const {
  std::filesystem::path path = AudioPath(utterance_id);
  AudioSlice slice;
  slice.content_type = ContentType(path);
  slice.total_size = std::filesystem::file_size(path);
  return slice;
}

AudioSlice AnnotationService::ReadAudio(const std::string& utterance_id,
                                        std::optional<ByteRange> range) const {
  std::filesystem::path path = AudioPath(utterance_id);
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kNotFound, "cannot read " + path.string());
  }
  AudioSlice slice;
  slice.content_type = ContentType(path);
  in.seekg(0, std::ios::end);
  slice.total_size = static_cast<uint64_t>(in.tellg());
  uint64_t first = 0;
  uint64_t last = slice.total_size == 0 ? 0 : slice.total_size - 1;
  if (range) {
    if (range->first >= slice.total_size ||
        (range->last && *range->last < range->first)) {
      throw Error(ErrorCode::kDomainError, "unsatisfiable byte range");
    }
    first = range->first;
    if (range->last) last = std::min(*range->last, last);
    slice.partial = true;
  }
  slice.first = first;
  if (slice.total_size > 0) {
    slice.bytes.resize(last - first + 1);
    in.seekg(static_cast<std::streamoff>(first));
    in.read(slice.bytes.data(),
            static_cast<std::streamsize>(slice.bytes.size()));
    if (!in) throw Error(ErrorCode::kIoError, "short read on " + path.string());
  }
  return slice;
}

}  // namespace phonaudit
