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

#include "phonaudit/corpus_io.h"

#include <fstream>
#include <sstream>

#include "phonaudit/errors.h"

namespace phonaudit {

using nlohmann::json;

namespace {

template <typename T>
T Required(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw Error(ErrorCode::kMalformedInput,
                std::string("missing field '") + key + "'");
  }
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::kMalformedInput,
                std::string("field '") + key + "' has the wrong type");
  }
}

template <typename T>
T Optional(const json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::kMalformedInput,
                std::string("field '") + key + "' has the wrong type");
  }
}

std::ifstream OpenOrThrow(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return in;
}

}  // namespace

void ForEachJsonLine(std::istream& in, const std::string& origin,
                     const std::function<void(const json&, int)>& fn) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::kMalformedInput,
                  origin + ":" + std::to_string(line_no) + ": " + e.what());
    }
    try {
      fn(j, line_no);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kMalformedInput) throw;
      throw Error(ErrorCode::kMalformedInput,
                  origin + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

DatasetManifest::DatasetManifest(std::vector<ManifestEntry> entries)
    : entries_(std::move(entries)) {
  for (size_t i = 0; i < entries_.size(); ++i) {
    const ManifestEntry& e = entries_[i];
    if (e.utterance_id.empty()) {
      throw Error(ErrorCode::kMalformedInput, "empty utterance_id");
    }
    if (e.language_code.empty()) {
      throw Error(ErrorCode::kMalformedInput,
                  "utterance '" + e.utterance_id + "' has no language");
    }
    if (!(e.duration_s > 0.0)) {
      throw Error(ErrorCode::kMalformedInput,
                  "utterance '" + e.utterance_id + "' has duration <= 0");
    }
    if (!by_id_.emplace(e.utterance_id, i).second) {
      throw Error(ErrorCode::kMalformedInput,
                  "duplicate utterance_id '" + e.utterance_id + "'");
    }
    by_language_[e.language_code].push_back(i);
  }
}

DatasetManifest DatasetManifest::ReadJsonl(std::istream& in,
                                           const std::string& origin) {
  std::vector<ManifestEntry> entries;
  ForEachJsonLine(in, origin, [&](const json& j, int) {
    ManifestEntry e;
    e.utterance_id = Required<std::string>(j, "utterance_id");
    e.language_code = Required<std::string>(j, "language");
    e.audio_path = Optional<std::string>(j, "audio", "");
    e.gold = Required<std::string>(j, "gold");
    e.duration_s = Required<double>(j, "duration_s");
    entries.push_back(std::move(e));
  });
  return DatasetManifest(std::move(entries));
}

DatasetManifest DatasetManifest::Load(const std::filesystem::path& path) {
  std::ifstream in = OpenOrThrow(path);
  return ReadJsonl(in, path.string());
}

void DatasetManifest::WriteJsonl(std::ostream& out) const {
  for (const auto& e : entries_) {
    json j = {{"utterance_id", e.utterance_id},
              {"language", e.language_code},
              {"audio", e.audio_path},
              {"gold", e.gold},
              {"duration_s", e.duration_s}};
    out << j.dump() << '\n';
  }
}

const ManifestEntry* DatasetManifest::Find(std::string_view utterance_id) const {
  auto it = by_id_.find(utterance_id);
  return it == by_id_.end() ? nullptr : &entries_[it->second];
}

std::vector<std::string> DatasetManifest::languages() const {
  std::vector<std::string> out;
  for (const auto& [lang, idx] : by_language_) out.push_back(lang);
  return out;
}

std::vector<const ManifestEntry*> DatasetManifest::ForLanguage(
    std::string_view language) const {
  std::vector<const ManifestEntry*> out;
  auto it = by_language_.find(language);
  if (it == by_language_.end()) return out;
  for (size_t i : it->second) out.push_back(&entries_[i]);
  return out;
}

std::map<std::string, int> DatasetManifest::CountsByLanguage() const {
  std::map<std::string, int> out;
  for (const auto& [lang, idx] : by_language_) {
    out[lang] = static_cast<int>(idx.size());
  }
  return out;
}

std::map<std::string, ModelTranscriptSet> ReadModelTranscripts(
    std::istream& in, const std::string& origin) {
  std::map<std::string, ModelTranscriptSet> sets;
  ForEachJsonLine(in, origin, [&](const json& j, int) {
    std::string model = Required<std::string>(j, "model_id");
    std::string utt = Required<std::string>(j, "utterance_id");
    ModelTranscriptSet& set = sets[model];
    set.model_id = model;
    if (!set.transcripts.emplace(utt, Required<std::string>(j, "transcript"))
             .second) {
      throw Error(ErrorCode::kMalformedInput,
                  "duplicate prediction for '" + utt + "' from " + model);
    }
  });
  return sets;
}

std::map<std::string, ModelTranscriptSet> LoadModelTranscripts(
    const std::filesystem::path& path) {
  std::ifstream in = OpenOrThrow(path);
  return ReadModelTranscripts(in, path.string());
}

void WriteModelTranscripts(std::ostream& out, const ModelTranscriptSet& set) {
  for (const auto& [utt, text] : set.transcripts) {
    out << json{{"utterance_id", utt},
                {"model_id", set.model_id},
                {"transcript", text}}
               .dump()
        << '\n';
  }
}

json ToJson(const BlindTask& t) {
  return {{"task_id", t.task_id},           {"language", t.language_code},
          {"utterance_id", t.utterance_id}, {"audio", t.audio_path},
          {"transcript_a", t.transcript_a}, {"transcript_b", t.transcript_b}};
}

BlindTask BlindTaskFromJson(const json& j) {
  BlindTask t;
  t.task_id = Required<std::string>(j, "task_id");
  t.language_code = Required<std::string>(j, "language");
  t.utterance_id = Required<std::string>(j, "utterance_id");
  t.audio_path = Optional<std::string>(j, "audio", "");
  t.transcript_a = Required<std::string>(j, "transcript_a");
  t.transcript_b = Required<std::string>(j, "transcript_b");
  return t;
}

json ToJson(const TaskKey& k) {
  return {{"task_id", k.task_id},
          {"a_is_gold", k.a_is_gold},
          {"model_id", k.model_id}};
}

TaskKey TaskKeyFromJson(const json& j) {
  TaskKey k;
  k.task_id = Required<std::string>(j, "task_id");
  k.a_is_gold = Required<bool>(j, "a_is_gold");
  k.model_id = Optional<std::string>(j, "model_id", "");
  return k;
}

json ToJson(const PreferenceRecord& r) {
  return {{"task_id", r.task_id},
          {"annotator_id", r.annotator_id},
          {"choice", std::string(ChoiceName(r.choice))},
          {"influential_words",
           {{"a", r.influential_words_a}, {"b", r.influential_words_b}}},
          {"timestamps", r.timestamps},
          {"playback_speeds", r.playback_speeds}};
}

PreferenceRecord RecordFromJson(const json& j) {
  if (!j.is_object()) {
    throw Error(ErrorCode::kMalformedInput, "record must be a JSON object");
  }
  PreferenceRecord r;
  r.task_id = Required<std::string>(j, "task_id");
  r.annotator_id = Required<std::string>(j, "annotator_id");
  r.choice = ParseChoice(Required<std::string>(j, "choice"));
  if (auto it = j.find("influential_words"); it != j.end() && !it->is_null()) {
    if (!it->is_object()) {
      throw Error(ErrorCode::kMalformedInput,
                  "influential_words must be an object {a: [...], b: [...]}");
    }
    r.influential_words_a = Optional<std::vector<int>>(*it, "a", {});
    r.influential_words_b = Optional<std::vector<int>>(*it, "b", {});
  }
  r.timestamps = Optional<std::vector<std::string>>(j, "timestamps", {});
  r.playback_speeds = Optional<std::vector<double>>(j, "playback_speeds", {});
  ValidateRecord(r);
  return r;
}

json ToJson(const TestConfig& c) {
  return {{"alpha", c.alpha},
          {"theta_null", c.theta_null},
          {"theta_alt", c.theta_alt},
          {"sample_size", c.sample_size},
          {"min_decided", c.min_decided}};
}

TestConfig TestConfigFromJson(const json& j, TestConfig defaults) {
  TestConfig c = defaults;
  c.alpha = Optional<double>(j, "alpha", c.alpha);
  c.theta_null = Optional<double>(j, "theta_null", c.theta_null);
  c.theta_alt = Optional<double>(j, "theta_alt", c.theta_alt);
  c.sample_size = Optional<int>(j, "sample_size", c.sample_size);
  c.min_decided = Optional<int>(j, "min_decided", c.min_decided);
  c.Validate();
  return c;
}

json ToJson(const Verdict& v) {
  return {{"language", v.language_code},
          {"n_annotated", v.n_annotated},
          {"gold_preferred", v.counts.gold_preferred},
          {"model_preferred", v.counts.model_preferred},
          {"abstain_good", v.counts.abstain_good},
          {"abstain_poor", v.counts.abstain_poor},
          {"abstentions", v.abstentions},
          {"n_trials", v.n_trials},
          {"critical_value", v.critical_value},
          {"decision", std::string(DecisionName(v.decision))},
          {"config", ToJson(v.config)}};
}

std::vector<BlindTask> ReadTasks(std::istream& in) {
  std::vector<BlindTask> out;
  ForEachJsonLine(in, "<tasks>", [&](const json& j, int) {
    out.push_back(BlindTaskFromJson(j));
  });
  return out;
}

std::vector<TaskKey> ReadKeys(std::istream& in) {
  std::vector<TaskKey> out;
  ForEachJsonLine(in, "<key>",
                  [&](const json& j, int) { out.push_back(TaskKeyFromJson(j)); });
  return out;
}

std::vector<PreferenceRecord> ReadRecords(std::istream& in) {
  std::vector<PreferenceRecord> out;
  ForEachJsonLine(in, "<records>",
                  [&](const json& j, int) { out.push_back(RecordFromJson(j)); });
  return out;
}

std::vector<BlindTask> LoadTasks(const std::filesystem::path& path) {
  std::ifstream in = OpenOrThrow(path);
  return ReadTasks(in);
}

std::vector<TaskKey> LoadKeys(const std::filesystem::path& path) {
  std::ifstream in = OpenOrThrow(path);
  return ReadKeys(in);
}

std::vector<PreferenceRecord> LoadRecords(const std::filesystem::path& path) {
  std::ifstream in = OpenOrThrow(path);
  return ReadRecords(in);
}

void WriteFileAtomic(const std::filesystem::path& path,
                     std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoError, "cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::kIoError, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw Error(ErrorCode::kIoError,
                "cannot rename " + tmp.string() + ": " + ec.message());
  }
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in = OpenOrThrow(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace phonaudit
