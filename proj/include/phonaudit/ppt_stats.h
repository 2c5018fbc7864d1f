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

// Exact one-sided binomial test on how often annotators prefer the gold
// transcript over a baseline model's transcript.
//
// Under the null the annotator has no preference (theta_null = 0.5). A
// language subset is flagged when the gold side wins k times or fewer, where
// k is the largest count whose null CDF stays within alpha. Power is the
// probability of flagging when the gold preference rate is theta_alt.

#ifndef PHONAUDIT_PPT_STATS_H_
#define PHONAUDIT_PPT_STATS_H_

#include <span>
#include <string>
#include <vector>

#include "phonaudit/annotation.h"

namespace phonaudit {

struct TestConfig {
  double alpha = 0.05;
  double theta_null = 0.5;
  double theta_alt = 0.2;
  // Trials per language; abstentions and missing annotations count toward it.
  int sample_size = 20;
  // Fewer forced choices than this raises kInsufficientAnnotations.
  int min_decided = 15;

  // Throws Error(kDomainError) unless 0 < alpha < 1, 0 < theta_alt <
  // theta_null < 1 and the counts are sensible. theta_alt == theta_null is
  // accepted so that power can be checked against the type-I rate.
  void Validate() const;
};

struct PowerRow {
  int n = 0;
  int k = -1;  // reject when successes <= k; -1 means never
  double power = 0.0;
  double type1 = 0.0;
};

// P(X <= k) for X ~ Binomial(n, p). k = -1 gives 0 and k = n gives exactly 1.
// Exact dyadic-rational arithmetic for n <= 64 (the result is the correctly
// rounded double of the exact sum); log-space summation above. Throws
// Error(kDomainError) outside n >= 1, -1 <= k <= n, 0 <= p <= 1.
double BinomCdf(int k, int n, double p);

// Largest k in [-1, n] with BinomCdf(k, n, theta_null) <= alpha. The
// comparison is exact for n <= 64.
int CriticalValue(int n, double alpha, double theta_null);

PowerRow PowerAt(const TestConfig& config, int n);
std::vector<PowerRow> SampleSizeTable(const TestConfig& config,
                                      std::span<const int> n_values);

struct PreferenceCounts {
  int gold_preferred = 0;
  int model_preferred = 0;
  int abstain_good = 0;
  int abstain_poor = 0;

  int total() const {
    return gold_preferred + model_preferred + abstain_good + abstain_poor;
  }
  int decided() const { return gold_preferred + model_preferred; }
  void Add(ResolvedPreference preference);
};

enum class Decision { kPass, kFlag };

std::string_view DecisionName(Decision decision);

struct Verdict {
  std::string language_code;
  PreferenceCounts counts;
  int n_annotated = 0;
  int abstentions = 0;
  int n_trials = 0;  // binomial n used for the critical value
  int critical_value = -1;
  Decision decision = Decision::kPass;
  TestConfig config;
};

// Abstentions count toward neither side: gold_preferred is tested against
// the critical value for max(sample_size, n_annotated) trials, so an
// abstention behaves like a gold preference when deciding to flag. Throws
// Error(kInsufficientAnnotations) when decided() < config.min_decided.
Verdict PptVerdict(const PreferenceCounts& counts, const TestConfig& config,
                   std::string language_code = {});

// Share of items on which two annotators made the same choice. Throws
// Error(kMismatchedItems) unless both cover the same, nonempty, set of tasks
// with one record per task.
double Agreement(std::span<const PreferenceRecord> a,
                 std::span<const PreferenceRecord> b);

}  // namespace phonaudit

#endif  // PHONAUDIT_PPT_STATS_H_
