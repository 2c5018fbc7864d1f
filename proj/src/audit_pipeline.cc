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

#include "phonaudit/audit_pipeline.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "phonaudit/errors.h"
#include "phonaudit/unicode.h"

namespace phonaudit {

using nlohmann::json;

namespace {

uint64_t Fnv1a64(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

json ToJson(const LanguageAggregate& a) {
  return {{"median", a.median_pfer},
          {"q1", a.q1},
          {"q3", a.q3},
          {"iqr", a.iqr_pfer},
          {"n", a.n_utterances}};
}

std::vector<std::string> StringList(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) return {};
  try {
    return it->get<std::vector<std::string>>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::kMalformedInput,
                std::string("report field '") + key + "' is not a string list");
  }
}

}  // namespace

Transcript TokenizeOrEmpty(std::string_view raw) {
  if (unicode::Canonicalize(raw).empty()) return {};
  return Tokenize(raw);
}

double LanguageScores::Median(const std::string& language,
                              const std::string& model) const {
  return table.at(language).at(model).normalized.median_pfer;
}

LanguageScores ScoreLanguages(const DatasetManifest& manifest,
                              std::span<const ModelTranscriptSet> models,
                              const CostModel& cost, double min_coverage) {
  if (models.empty()) {
    throw Error(ErrorCode::kMissingPredictions, "no model transcript sets");
  }
  LanguageScores out;
  // Gold tokenization is shared by every model.
  std::vector<Transcript> gold;
  gold.reserve(manifest.size());
  for (const ManifestEntry& e : manifest.entries()) {
    Transcript t = Tokenize(e.gold);
    t.utterance_id = e.utterance_id;
    t.language_code = e.language_code;
    gold.push_back(std::move(t));
  }

  for (const ModelTranscriptSet& model : models) {
    for (const auto& [utt, text] : model.transcripts) {
      if (manifest.Find(utt) == nullptr) {
        throw Error(ErrorCode::kMalformedInput,
                    "model " + model.model_id + " predicts unknown utterance '" +
                        utt + "'");
      }
    }
    std::map<std::string, std::vector<UtteranceScore>> by_language;
    std::map<std::string, int> totals;
    std::vector<UtteranceScore>& utterances = out.utterances[model.model_id];
    for (size_t i = 0; i < manifest.size(); ++i) {
      const ManifestEntry& e = manifest.entries()[i];
      ++totals[e.language_code];
      auto it = model.transcripts.find(e.utterance_id);
      if (it == model.transcripts.end()) continue;
      UtteranceScore s = Pfer(gold[i], TokenizeOrEmpty(it->second), cost);
      by_language[e.language_code].push_back(s);
      utterances.push_back(std::move(s));
    }
    for (const auto& [language, total] : totals) {
      auto& scores = by_language[language];
      double coverage = static_cast<double>(scores.size()) / total;
      if (scores.empty() || coverage < min_coverage) {
        throw Error(ErrorCode::kMissingPredictions,
                    "model " + model.model_id + " covers " +
                        std::to_string(scores.size()) + "/" +
                        std::to_string(total) + " utterances of " + language);
      }
      ModelLanguageScore& cell = out.table[language][model.model_id];
      cell.normalized = AggregateLanguage(scores, PferMeasure::kNormalized);
      cell.raw = AggregateLanguage(scores, PferMeasure::kRaw);
      cell.covered = static_cast<int>(scores.size());
      cell.total = total;
    }
    out.model_ids.push_back(model.model_id);
  }
  std::sort(out.model_ids.begin(), out.model_ids.end());
  out.model_ids.erase(std::unique(out.model_ids.begin(), out.model_ids.end()),
                      out.model_ids.end());

  for (size_t a = 0; a < out.model_ids.size(); ++a) {
    for (size_t b = a + 1; b < out.model_ids.size(); ++b) {
      std::vector<double> x, y;
      for (const auto& [language, row] : out.table) {
        x.push_back(row.at(out.model_ids[a]).normalized.median_pfer);
        y.push_back(row.at(out.model_ids[b]).normalized.median_pfer);
      }
      out.correlations[{out.model_ids[a], out.model_ids[b]}] =
          PearsonCorrelation(x, y);
    }
  }
  return out;
}

AuditSelection SelectAuditLanguages(const LanguageScores& scores,
                                    double quantile) {
  if (!(quantile >= 0.0 && quantile < 1.0)) {
    throw Error(ErrorCode::kDomainError, "quantile must be in [0, 1)");
  }
  AuditSelection selection;
  selection.quantile = quantile;
  std::set<std::string> chosen;
  for (const std::string& model : scores.model_ids) {
    std::vector<double> medians;
    for (const auto& [language, row] : scores.table) {
      medians.push_back(row.at(model).normalized.median_pfer);
    }
    if (medians.empty()) continue;
    double threshold = quantile == 0.0
                           ? -std::numeric_limits<double>::infinity()
                           : Quantile(medians, quantile);
    selection.thresholds[model] = threshold;
    for (const auto& [language, row] : scores.table) {
      if (row.at(model).normalized.median_pfer > threshold) {
        chosen.insert(language);
      }
    }
  }
  selection.selected.assign(chosen.begin(), chosen.end());
  return selection;
}

std::string BestModel(const LanguageScores& scores,
                      const std::string& language) {
  auto it = scores.table.find(language);
  if (it == scores.table.end() || it->second.empty()) {
    throw Error(ErrorCode::kMissingPredictions,
                "no scores for language " + language);
  }
  // Map order is lexicographic, so strict < keeps the first of equal models.
  const std::string* best = nullptr;
  double best_median = 0.0;
  for (const auto& [model, cell] : it->second) {
    if (best == nullptr || cell.normalized.median_pfer < best_median) {
      best = &model;
      best_median = cell.normalized.median_pfer;
    }
  }
  return *best;
}

SeededRng::SeededRng(uint64_t seed, std::string_view stream)
    : engine_(SplitMix64(seed ^ Fnv1a64(stream))) {}

uint64_t SeededRng::Below(uint64_t bound) {
  if (bound == 0) throw Error(ErrorCode::kDomainError, "empty range");
  // Reject the 2^64 mod bound lowest draws so every residue is equally likely.
  const uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    uint64_t r = engine_();
    if (r >= threshold) return r % bound;
  }
}

std::vector<AnnotationTask> SampleTasks(const DatasetManifest& manifest,
                                        const std::string& language,
                                        const ModelTranscriptSet& model,
                                        int n, uint64_t seed,
                                        const CostModel& cost) {
  if (n < 1) throw Error(ErrorCode::kDomainError, "n must be positive");
  std::vector<const ManifestEntry*> candidates;
  for (const ManifestEntry* e : manifest.ForLanguage(language)) {
    if (model.transcripts.contains(e->utterance_id)) candidates.push_back(e);
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const ManifestEntry* a, const ManifestEntry* b) {
              return a->utterance_id < b->utterance_id;
            });
  if (candidates.size() < static_cast<size_t>(n)) {
    throw Error(ErrorCode::kInsufficientUtterances,
                language + " has " + std::to_string(candidates.size()) +
                    " utterances with predictions, need " + std::to_string(n));
  }

  SeededRng rng(seed, language);
  // Partial Fisher-Yates: the first n slots become the sample.
  for (size_t i = 0; i < static_cast<size_t>(n); ++i) {
    size_t j = i + rng.Below(candidates.size() - i);
    std::swap(candidates[i], candidates[j]);
  }

  std::vector<AnnotationTask> tasks;
  tasks.reserve(n);
  for (int i = 0; i < n; ++i) {
    const ManifestEntry& e = *candidates[i];
    Transcript gold = Tokenize(e.gold);
    std::vector<Phone> pred =
        TokenizeOrEmpty(model.transcripts.at(e.utterance_id)).Flatten();
    std::string gold_text = Render(gold);
    std::string model_text = Render(InduceSpaces(gold, pred, cost));

    AnnotationTask task;
    char id[32];
    std::snprintf(id, sizeof(id), "-%03d", i + 1);
    task.view.task_id = language + id;
    task.view.language_code = language;
    task.view.utterance_id = e.utterance_id;
    task.view.audio_path = e.audio_path;
    task.a_is_gold = rng.Coin();
    task.view.transcript_a = task.a_is_gold ? gold_text : model_text;
    task.view.transcript_b = task.a_is_gold ? model_text : gold_text;
    task.model_id = model.model_id;
    tasks.push_back(std::move(task));
  }
  return tasks;
}

void SplitTasks(std::span<const AnnotationTask> tasks,
                std::vector<BlindTask>* blind, std::vector<TaskKey>* keys) {
  for (const AnnotationTask& t : tasks) {
    if (blind != nullptr) blind->push_back(t.view);
    if (keys != nullptr) {
      keys->push_back({t.view.task_id, t.a_is_gold, t.model_id});
    }
  }
}

std::string_view LanguageStatusName(LanguageStatus status) {
  switch (status) {
    case LanguageStatus::kPass: return "pass";
    case LanguageStatus::kFlag: return "flag";
    case LanguageStatus::kInsufficientAnnotations:
      return "insufficient_annotations";
  }
  return "?";
}

AuditReport CompileReport(std::span<const BlindTask> tasks,
                          std::span<const TaskKey> keys,
                          std::span<const PreferenceRecord> records,
                          const TestConfig& config,
                          const LanguageScores* scores) {
  config.Validate();
  std::map<std::string, bool> a_is_gold;
  for (const TaskKey& k : keys) {
    if (!a_is_gold.emplace(k.task_id, k.a_is_gold).second) {
      throw Error(ErrorCode::kMalformedInput,
                  "duplicate key for task '" + k.task_id + "'");
    }
  }
  AuditReport report;
  report.config = config;
  std::map<std::string, std::string> task_language;
  for (const BlindTask& t : tasks) {
    if (!a_is_gold.contains(t.task_id)) {
      throw Error(ErrorCode::kMalformedInput,
                  "task '" + t.task_id + "' has no resolution key");
    }
    if (!task_language.emplace(t.task_id, t.language_code).second) {
      throw Error(ErrorCode::kMalformedInput,
                  "duplicate task '" + t.task_id + "'");
    }
    LanguageReport& lang = report.languages[t.language_code];
    lang.language_code = t.language_code;
    ++lang.n_tasks;
  }

  std::set<std::pair<std::string, std::string>> seen;
  for (const PreferenceRecord& r : records) {
    auto it = task_language.find(r.task_id);
    if (it == task_language.end()) {
      throw Error(ErrorCode::kUnknownTask, "record for unknown task '" +
                                               r.task_id + "'");
    }
    if (!seen.emplace(r.annotator_id, r.task_id).second) {
      throw Error(ErrorCode::kDuplicateRecord,
                  r.annotator_id + " annotated '" + r.task_id + "' twice");
    }
    ValidateRecord(r);
    report.languages[it->second].counts.Add(
        Resolve(r.choice, a_is_gold.at(r.task_id)));
  }

  std::vector<std::pair<int, std::string>> flagged;
  for (auto& [language, lang] : report.languages) {
    report.audited_languages.push_back(language);
    try {
      lang.verdict = PptVerdict(lang.counts, config, language);
      lang.status = lang.verdict->decision == Decision::kFlag
                        ? LanguageStatus::kFlag
                        : LanguageStatus::kPass;
      if (lang.status == LanguageStatus::kFlag) {
        flagged.emplace_back(lang.counts.gold_preferred, language);
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kInsufficientAnnotations) throw;
      lang.status = LanguageStatus::kInsufficientAnnotations;
      report.insufficient_languages.push_back(language);
    }
    if (scores != nullptr) {
      if (auto row = scores->table.find(language); row != scores->table.end()) {
        lang.metrics = row->second;
      }
    }
  }
  std::sort(flagged.begin(), flagged.end());
  for (auto& [count, language] : flagged) {
    report.flagged_languages.push_back(language);
  }
  return report;
}

json ToJson(const LanguageScores& scores) {
  json languages = json::object();
  for (const auto& [code, row] : scores.table) {
    json models = json::object();
    for (const auto& [model, cell] : row) {
      models[model] = {{"pfer_normalized", ToJson(cell.normalized)},
                       {"pfer_raw", ToJson(cell.raw)},
                       {"covered", cell.covered},
                       {"total", cell.total}};
    }
    languages[code] = models;
  }
  json correlations = json::array();
  for (const auto& [pair, r] : scores.correlations) {
    correlations.push_back({{"model_a", pair.first},
                            {"model_b", pair.second},
                            {"pearson_r", r ? json(*r) : json(nullptr)}});
  }
  return {{"quantile_rule", kQuantileRule},
          {"model_ids", scores.model_ids},
          {"languages", languages},
          {"correlations", correlations}};
}

json ToJson(const AuditSelection& selection) {
  json thresholds = json::object();
  for (const auto& [model, t] : selection.thresholds) {
    thresholds[model] = std::isfinite(t) ? json(t) : json(nullptr);
  }
  return {{"quantile", selection.quantile},
          {"quantile_rule", kQuantileRule},
          {"thresholds", thresholds},
          {"selected", selection.selected}};
}

json SelectionWithModels(const AuditSelection& selection,
                         const LanguageScores& scores) {
  json j = ToJson(selection);
  json best = json::object();
  for (const std::string& code : selection.selected) {
    best[code] = BestModel(scores, code);
  }
  j["best_model"] = best;
  return j;
}

json ToJson(const AuditReport& report) {
  json languages = json::object();
  for (const auto& [code, lang] : report.languages) {
    json entry = {{"status", std::string(LanguageStatusName(lang.status))},
                  {"n_tasks", lang.n_tasks},
                  {"counts",
                   {{"gold_preferred", lang.counts.gold_preferred},
                    {"model_preferred", lang.counts.model_preferred},
                    {"abstain_good", lang.counts.abstain_good},
                    {"abstain_poor", lang.counts.abstain_poor}}}};
    entry["verdict"] = lang.verdict ? ToJson(*lang.verdict) : json(nullptr);
    if (!lang.metrics.empty()) {
      json metrics = json::object();
      for (const auto& [model, cell] : lang.metrics) {
        metrics[model] = {{"pfer_normalized", ToJson(cell.normalized)},
                          {"pfer_raw", ToJson(cell.raw)},
                          {"covered", cell.covered},
                          {"total", cell.total}};
      }
      entry["metrics"] = metrics;
    }
    languages[code] = entry;
  }
  return {{"config", ToJson(report.config)},
          {"quantile_rule", kQuantileRule},
          {"audited_languages", report.audited_languages},
          {"flagged_languages", report.flagged_languages},
          {"insufficient_languages", report.insufficient_languages},
          {"languages", languages}};
}

AuditReport ReportFromJson(const json& j) {
  if (!j.is_object()) {
    throw Error(ErrorCode::kMalformedInput, "report must be a JSON object");
  }
  AuditReport report;
  if (auto it = j.find("config"); it != j.end()) {
    report.config = TestConfigFromJson(*it);
  }
  report.audited_languages = StringList(j, "audited_languages");
  report.flagged_languages = StringList(j, "flagged_languages");
  report.insufficient_languages = StringList(j, "insufficient_languages");
  return report;
}

FilterResult FilterManifest(const DatasetManifest& manifest,
                            const AuditReport& report) {
  std::set<std::string> flagged(report.flagged_languages.begin(),
                                report.flagged_languages.end());
  std::vector<ManifestEntry> kept;
  FilterResult result;
  for (const ManifestEntry& e : manifest.entries()) {
    if (flagged.contains(e.language_code)) {
      ++result.removed[e.language_code];
    } else {
      ++result.kept[e.language_code];
      kept.push_back(e);
    }
  }
  result.empty = kept.empty();
  result.manifest = DatasetManifest(std::move(kept));
  return result;
}

std::string TasksJsonl(std::span<const BlindTask> tasks) {
  std::string out;
  for (const auto& t : tasks) out += ToJson(t).dump() + "\n";
  return out;
}

std::string KeysJsonl(std::span<const TaskKey> keys) {
  std::string out;
  for (const auto& k : keys) out += ToJson(k).dump() + "\n";
  return out;
}

std::string RecordsJsonl(std::span<const PreferenceRecord> records) {
  std::string out;
  for (const auto& r : records) out += ToJson(r).dump() + "\n";
  return out;
}

std::string ManifestJsonl(const DatasetManifest& manifest) {
  std::ostringstream out;
  manifest.WriteJsonl(out);
  return out.str();
}

}  // namespace phonaudit
