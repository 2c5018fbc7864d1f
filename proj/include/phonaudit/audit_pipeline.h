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

// End-to-end audit: score languages against baseline recognizers, select the
// high-error ones, sample blind annotation tasks, turn annotations into
// verdicts and drop flagged languages from the manifest. Every stage is a
// pure function of its inputs, the seed and the config.

#ifndef PHONAUDIT_AUDIT_PIPELINE_H_
#define PHONAUDIT_AUDIT_PIPELINE_H_

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "phonaudit/alignment.h"
#include "phonaudit/annotation.h"
#include "phonaudit/corpus_io.h"
#include "phonaudit/metrics.h"
#include "phonaudit/ppt_stats.h"

namespace phonaudit {

inline constexpr char kQuantileRule[] =
    "linear interpolation between closest ranks: x[h], h = (N - 1) q";

// Tokenizes a possibly empty model output; blank text yields no words.
Transcript TokenizeOrEmpty(std::string_view raw);

struct ModelLanguageScore {
  LanguageAggregate normalized;
  LanguageAggregate raw;
  int covered = 0;  // utterances with a prediction
  int total = 0;    // utterances in the manifest
};

struct LanguageScores {
  std::vector<std::string> model_ids;  // sorted
  // language -> model -> aggregate
  std::map<std::string, std::map<std::string, ModelLanguageScore>> table;
  // model -> per-utterance scores, manifest order
  std::map<std::string, std::vector<UtteranceScore>> utterances;
  // (model_a, model_b) with model_a < model_b -> Pearson r over per-language
  // normalized medians; nullopt when undefined.
  std::map<std::pair<std::string, std::string>, std::optional<double>>
      correlations;

  // Normalized median PFER of one model on one language.
  double Median(const std::string& language, const std::string& model) const;
};

// Throws Error(kMissingPredictions) when a model covers less than
// min_coverage of some language, and Error(kMalformedInput) when a
// prediction names an utterance missing from the manifest.
LanguageScores ScoreLanguages(const DatasetManifest& manifest,
                              std::span<const ModelTranscriptSet> models,
                              const CostModel& cost,
                              double min_coverage = 1.0);

struct AuditSelection {
  double quantile = 0.0;
  std::map<std::string, double> thresholds;  // model -> threshold
  std::vector<std::string> selected;         // sorted
};

// A language is selected when its normalized median PFER is strictly above
// the quantile threshold of any model. quantile == 0 selects every language.
AuditSelection SelectAuditLanguages(const LanguageScores& scores,
                                    double quantile);

// Model with the lowest normalized median PFER on the language; ties go to
// the lexicographically smallest model_id.
std::string BestModel(const LanguageScores& scores,
                      const std::string& language);

// Portable seeded randomness: std::mt19937_64 (its output sequence is fixed
// by the C++ standard) with hand-rolled bounded draws, since the standard
// distributions differ between library implementations.
class SeededRng {
 public:
  SeededRng(uint64_t seed, std::string_view stream);

  uint64_t Next() { return engine_(); }
  // Unbiased integer in [0, bound).
  uint64_t Below(uint64_t bound);
  bool Coin() { return (engine_() >> 63) != 0; }

 private:
  std::mt19937_64 engine_;
};

// Draws n utterances of one language uniformly without replacement, induces
// word boundaries in each prediction from its gold transcript, and randomizes
// which side is shown as A. Throws Error(kInsufficientUtterances) when fewer
// than n utterances have predictions.
std::vector<AnnotationTask> SampleTasks(const DatasetManifest& manifest,
                                        const std::string& language,
                                        const ModelTranscriptSet& model,
                                        int n, uint64_t seed,
                                        const CostModel& cost);

void SplitTasks(std::span<const AnnotationTask> tasks,
                std::vector<BlindTask>* blind, std::vector<TaskKey>* keys);

enum class LanguageStatus { kPass, kFlag, kInsufficientAnnotations };

std::string_view LanguageStatusName(LanguageStatus status);

struct LanguageReport {
  std::string language_code;
  PreferenceCounts counts;
  int n_tasks = 0;
  LanguageStatus status = LanguageStatus::kInsufficientAnnotations;
  std::optional<Verdict> verdict;
  // model -> aggregates, when scores were supplied.
  std::map<std::string, ModelLanguageScore> metrics;
};

struct AuditReport {
  TestConfig config;
  std::vector<std::string> audited_languages;  // sorted
  // Ordered by gold-preference count, then language code.
  std::vector<std::string> flagged_languages;
  std::vector<std::string> insufficient_languages;
  std::map<std::string, LanguageReport> languages;
};

// Resolves each record through the key and runs the preference test per
// language. Throws Error(kUnknownTask) for records without a task and
// Error(kDuplicateRecord) when an annotator answers a task twice.
AuditReport CompileReport(std::span<const BlindTask> tasks,
                          std::span<const TaskKey> keys,
                          std::span<const PreferenceRecord> records,
                          const TestConfig& config,
                          const LanguageScores* scores = nullptr);

nlohmann::json ToJson(const LanguageScores& scores);
nlohmann::json ToJson(const AuditSelection& selection);
// Selected languages with the best model of each.
nlohmann::json SelectionWithModels(const AuditSelection& selection,
                                   const LanguageScores& scores);
nlohmann::json ToJson(const AuditReport& report);
// Only the fields FilterManifest needs: config and language lists.
AuditReport ReportFromJson(const nlohmann::json& j);

struct FilterResult {
  DatasetManifest manifest;
  std::map<std::string, int> kept;     // language -> entries
  std::map<std::string, int> removed;  // language -> entries
  bool empty = false;
};

// Drops every entry of a flagged language; order of survivors is preserved.
FilterResult FilterManifest(const DatasetManifest& manifest,
                            const AuditReport& report);

// Serializers used for byte-stable outputs.
std::string TasksJsonl(std::span<const BlindTask> tasks);
std::string KeysJsonl(std::span<const TaskKey> keys);
std::string RecordsJsonl(std::span<const PreferenceRecord> records);
std::string ManifestJsonl(const DatasetManifest& manifest);

}  // namespace phonaudit

#endif  // PHONAUDIT_AUDIT_PIPELINE_H_
