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

// Transcript- and corpus-level error metrics over feature-weighted
// alignments. Word boundaries are ignored: every metric aligns the flattened
// phone sequences.

#ifndef PHONAUDIT_METRICS_H_
#define PHONAUDIT_METRICS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "phonaudit/alignment.h"
#include "phonaudit/phone.h"

namespace phonaudit {

// Phonetic feature error rate of one utterance. pfer_raw is the alignment
// cost; pfer_normalized divides it by the gold length in phones.
struct UtteranceScore {
  std::string utterance_id;
  std::string language_code;
  double pfer_raw = 0.0;
  double pfer_normalized = 0.0;
  size_t gold_length = 0;
};

// Throws Error(kEmptyGold) if gold has no phones.
UtteranceScore Pfer(const Transcript& gold, const Transcript& pred,
                    const CostModel& cost);

// One gold/pred pair aligned once and reused by every per-phone metric.
struct AlignedPair {
  std::vector<Phone> gold;
  std::vector<Phone> pred;
  AlignmentPath path;
};

AlignedPair AlignPair(const Transcript& gold, const Transcript& pred,
                      const CostModel& cost);

struct PhoneErrorProfile {
  std::string phone;
  int64_t occurrence_count = 0;
  // Mean step cost over occurrences; a deletion costs indel_cost.
  double expected_error = 0.0;
  // Mode of the aligned predictions; nullopt is the gap. Ties go to the
  // label that sorts first, with the gap sorting as "-".
  std::optional<std::string> majority_label;
  int64_t exact_count = 0;
  double recall = 0.0;
  // aligned prediction ("-" for a gap) -> count
  std::map<std::string, int64_t> label_counts;
};

inline constexpr const char* kGapLabel = "-";

// Throws Error(kPhoneNotFound) if the phone never occurs in the gold side.
PhoneErrorProfile ExpectedPhoneError(std::span<const AlignedPair> corpus,
                                     const std::string& phone);

// Profiles for every phone attested in the gold side, keyed by surface.
std::map<std::string, PhoneErrorProfile> PhoneProfiles(
    std::span<const AlignedPair> corpus);

// Recall per requested phone. Throws Error(kPhoneNotFound) naming every
// requested phone absent from the gold side.
std::map<std::string, PhoneErrorProfile> PhoneRecall(
    std::span<const AlignedPair> corpus, const std::set<std::string>& phones);

// Linear interpolation between closest ranks: for sorted x of size N the
// q-quantile is x[h] interpolated at h = (N - 1) q. Throws
// Error(kEmptyScoreList) on empty input and kDomainError outside [0, 1].
double Quantile(std::span<const double> values, double q);

struct LanguageAggregate {
  std::string language_code;
  double median_pfer = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double iqr_pfer = 0.0;
  int64_t n_utterances = 0;
};

enum class PferMeasure { kRaw, kNormalized };

std::string_view PferMeasureName(PferMeasure measure);

// Throws Error(kEmptyScoreList) on empty input.
LanguageAggregate AggregateLanguage(std::span<const UtteranceScore> scores,
                                    PferMeasure measure =
                                        PferMeasure::kNormalized);

// Pearson correlation; nullopt when either side has zero variance or fewer
// than two points.
std::optional<double> PearsonCorrelation(std::span<const double> x,
                                         std::span<const double> y);

}  // namespace phonaudit

#endif  // PHONAUDIT_METRICS_H_
