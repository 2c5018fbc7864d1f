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

#include "phonaudit/metrics.h"

#include <algorithm>
#include <cmath>

#include "phonaudit/errors.h"

namespace phonaudit {
namespace {

struct Accumulator {
  int64_t count = 0;
  double cost_sum = 0.0;
  int64_t exact = 0;
  std::map<std::string, int64_t> labels;
};

PhoneErrorProfile Finish(const std::string& phone, const Accumulator& acc) {
  PhoneErrorProfile profile;
  profile.phone = phone;
  profile.occurrence_count = acc.count;
  profile.expected_error = acc.cost_sum / static_cast<double>(acc.count);
  profile.exact_count = acc.exact;
  profile.recall =
      static_cast<double>(acc.exact) / static_cast<double>(acc.count);
  profile.label_counts = acc.labels;
  // std::map iterates in label order, so the first maximum wins ties.
  const std::string* best = nullptr;
  int64_t best_count = -1;
  for (const auto& [label, n] : acc.labels) {
    if (n > best_count) {
      best = &label;
      best_count = n;
    }
  }
  if (best != nullptr && *best != kGapLabel) profile.majority_label = *best;
  return profile;
}

// Visits every gold position with its aligned prediction (nullptr = gap).
template <typename Fn>
void ForEachGoldStep(std::span<const AlignedPair> corpus, Fn&& fn) {
  for (const AlignedPair& pair : corpus) {
    for (const AlignmentStep& step : pair.path.steps) {
      if (!step.gold_index) continue;
      const Phone& gold = pair.gold[*step.gold_index];
      const Phone* pred =
          step.pred_index ? &pair.pred[*step.pred_index] : nullptr;
      fn(gold, pred, step.cost);
    }
  }
}

void Observe(Accumulator& acc, const Phone& gold, const Phone* pred,
             double cost) {
  ++acc.count;
  acc.cost_sum += cost;
  if (pred != nullptr && pred->surface == gold.surface) ++acc.exact;
  ++acc.labels[pred != nullptr ? pred->surface : std::string(kGapLabel)];
}

}  // namespace

UtteranceScore Pfer(const Transcript& gold, const Transcript& pred,
                    const CostModel& cost) {
  std::vector<Phone> g = gold.Flatten();
  if (g.empty()) {
    throw Error(ErrorCode::kEmptyGold,
                "gold transcript '" + gold.utterance_id + "' has no phones");
  }
  std::vector<Phone> p = pred.Flatten();
  UtteranceScore score;
  score.utterance_id = gold.utterance_id;
  score.language_code = gold.language_code;
  score.gold_length = g.size();
  score.pfer_raw = Align(g, p, cost).total_cost;
  score.pfer_normalized = score.pfer_raw / static_cast<double>(g.size());
  return score;
}

AlignedPair AlignPair(const Transcript& gold, const Transcript& pred,
                      const CostModel& cost) {
  AlignedPair pair;
  pair.gold = gold.Flatten();
  pair.pred = pred.Flatten();
  pair.path = Align(pair.gold, pair.pred, cost);
  return pair;
}

PhoneErrorProfile ExpectedPhoneError(std::span<const AlignedPair> corpus,
                                     const std::string& phone) {
  Accumulator acc;
  ForEachGoldStep(corpus, [&](const Phone& gold, const Phone* pred, double c) {
    if (gold.surface == phone) Observe(acc, gold, pred, c);
  });
  if (acc.count == 0) {
    throw Error(ErrorCode::kPhoneNotFound,
                "'" + phone + "' does not occur in the gold transcripts");
  }
  return Finish(phone, acc);
}

std::map<std::string, PhoneErrorProfile> PhoneProfiles(
    std::span<const AlignedPair> corpus) {
  std::map<std::string, Accumulator> accs;
  ForEachGoldStep(corpus, [&](const Phone& gold, const Phone* pred, double c) {
    Observe(accs[gold.surface], gold, pred, c);
  });
  std::map<std::string, PhoneErrorProfile> out;
  for (const auto& [phone, acc] : accs) out.emplace(phone, Finish(phone, acc));
  return out;
}

std::map<std::string, PhoneErrorProfile> PhoneRecall(
    std::span<const AlignedPair> corpus, const std::set<std::string>& phones) {
  std::map<std::string, Accumulator> accs;
  ForEachGoldStep(corpus, [&](const Phone& gold, const Phone* pred, double c) {
    if (phones.contains(gold.surface)) Observe(accs[gold.surface], gold, pred, c);
  });
  std::string missing;
  for (const std::string& phone : phones) {
    if (!accs.contains(phone)) missing += (missing.empty() ? "" : ", ") + phone;
  }
  if (!missing.empty()) {
    throw Error(ErrorCode::kPhoneNotFound, "not in gold transcripts: " + missing);
  }
  std::map<std::string, PhoneErrorProfile> out;
  for (const auto& [phone, acc] : accs) out.emplace(phone, Finish(phone, acc));
  return out;
}

double Quantile(std::span<const double> values, double q) {
  if (values.empty()) throw Error(ErrorCode::kEmptyScoreList, "no values");
  if (!(q >= 0.0 && q <= 1.0)) {
    throw Error(ErrorCode::kDomainError, "quantile must be in [0, 1]");
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  double h = static_cast<double>(sorted.size() - 1) * q;
  size_t lo = static_cast<size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

std::string_view PferMeasureName(PferMeasure measure) {
  return measure == PferMeasure::kRaw ? "pfer_raw" : "pfer_normalized";
}

LanguageAggregate AggregateLanguage(std::span<const UtteranceScore> scores,
                                    PferMeasure measure) {
  if (scores.empty()) {
    throw Error(ErrorCode::kEmptyScoreList, "no utterance scores");
  }
  std::vector<double> values;
  values.reserve(scores.size());
  for (const auto& s : scores) {
    values.push_back(measure == PferMeasure::kRaw ? s.pfer_raw
                                                  : s.pfer_normalized);
  }
  LanguageAggregate agg;
  agg.language_code = scores.front().language_code;
  agg.median_pfer = Quantile(values, 0.5);
  agg.q1 = Quantile(values, 0.25);
  agg.q3 = Quantile(values, 0.75);
  agg.iqr_pfer = agg.q3 - agg.q1;
  agg.n_utterances = static_cast<int64_t>(scores.size());
  return agg;
}

std::optional<double> PearsonCorrelation(std::span<const double> x,
                                         std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) return std::nullopt;
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace phonaudit
