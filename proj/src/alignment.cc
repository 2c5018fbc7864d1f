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

#include "phonaudit/alignment.h"

#include <algorithm>
#include <cmath>

#include "phonaudit/csv.h"
#include "phonaudit/errors.h"

namespace phonaudit {
namespace {

bool NearlyEqual(double a, double b) {
  return std::fabs(a - b) <= 1e-9 * std::max(1.0, std::fabs(a));
}

std::vector<const FeatureVector*> Resolve(std::span<const Phone> phones,
                                          const FeatureTable& table) {
  std::vector<const FeatureVector*> out;
  out.reserve(phones.size());
  for (const Phone& p : phones) out.push_back(table.Find(p.surface));
  return out;
}

}  // namespace

CostModel::CostModel(const FeatureTable& table, double indel_cost,
                     double unknown_phone_cost)
    : table_(&table),
      indel_cost_(indel_cost),
      unknown_phone_cost_(unknown_phone_cost) {
  if (!(indel_cost >= 0.0) || !std::isfinite(indel_cost)) {
    throw Error(ErrorCode::kDomainError, "indel cost must be non-negative");
  }
  if (!(unknown_phone_cost >= 0.0 && unknown_phone_cost <= 1.0)) {
    throw Error(ErrorCode::kDomainError, "unknown phone cost must be in [0,1]");
  }
}

double CostModel::Substitution(const Phone& a, const Phone& b) const {
  return Substitution(a, table_->Find(a.surface), b, table_->Find(b.surface));
}

double CostModel::Substitution(const Phone& a, const FeatureVector* fa,
                               const Phone& b, const FeatureVector* fb) const {
  if (a.surface == b.surface) return 0.0;
  if (fa == nullptr || fb == nullptr) return unknown_phone_cost_;
  return static_cast<double>(HammingDistance(*fa, *fb)) /
         static_cast<double>(table_->feature_count());
}

std::string_view EditOpName(EditOp op) {
  switch (op) {
    case EditOp::kMatch: return "match";
    case EditOp::kSubstitute: return "substitute";
    case EditOp::kInsert: return "insert";
    case EditOp::kDelete: return "delete";
  }
  return "?";
}

AlignmentPath Align(std::span<const Phone> gold, std::span<const Phone> pred,
                    const CostModel& cost) {
  const size_t n = gold.size();
  const size_t m = pred.size();
  const double indel = cost.indel_cost();
  auto gold_fv = Resolve(gold, cost.table());
  auto pred_fv = Resolve(pred, cost.table());

  // score[i * (m + 1) + j]: best cost of gold[0, i) against pred[0, j).
  std::vector<double> score((n + 1) * (m + 1));
  std::vector<double> sub(n * m);
  auto at = [m](size_t i, size_t j) { return i * (m + 1) + j; };
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < m; ++j) {
      sub[i * m + j] =
          cost.Substitution(gold[i], gold_fv[i], pred[j], pred_fv[j]);
    }
  }
  for (size_t i = 1; i <= n; ++i) score[at(i, 0)] = score[at(i - 1, 0)] + indel;
  for (size_t j = 1; j <= m; ++j) score[at(0, j)] = score[at(0, j - 1)] + indel;
  for (size_t i = 1; i <= n; ++i) {
    for (size_t j = 1; j <= m; ++j) {
      double diag = score[at(i - 1, j - 1)] + sub[(i - 1) * m + (j - 1)];
      double del = score[at(i - 1, j)] + indel;
      double ins = score[at(i, j - 1)] + indel;
      score[at(i, j)] = std::min({diag, del, ins});
    }
  }

  AlignmentPath path;
  path.steps.reserve(n + m);
  size_t i = n;
  size_t j = m;
  while (i > 0 || j > 0) {
    const double here = score[at(i, j)];
    if (i > 0 && j > 0) {
      double c = sub[(i - 1) * m + (j - 1)];
      if (NearlyEqual(here, score[at(i - 1, j - 1)] + c)) {
        EditOp op = gold[i - 1].surface == pred[j - 1].surface
                        ? EditOp::kMatch
                        : EditOp::kSubstitute;
        path.steps.push_back({op, i - 1, j - 1, c});
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && NearlyEqual(here, score[at(i - 1, j)] + indel)) {
      path.steps.push_back({EditOp::kDelete, i - 1, std::nullopt, indel});
      --i;
      continue;
    }
    path.steps.push_back({EditOp::kInsert, std::nullopt, j - 1, indel});
    --j;
  }
  std::reverse(path.steps.begin(), path.steps.end());
  for (const auto& step : path.steps) path.total_cost += step.cost;
  return path;
}

Transcript InduceSpaces(const Transcript& gold,
                        std::span<const Phone> pred_flat,
                        const CostModel& cost) {
  std::vector<Phone> gold_flat = gold.Flatten();
  AlignmentPath path = Align(gold_flat, pred_flat, cost);

  // Gold positions that end a word (all but the final word).
  std::vector<bool> ends_word(gold_flat.size(), false);
  size_t offset = 0;
  for (size_t w = 0; w + 1 < gold.words.size(); ++w) {
    offset += gold.words[w].size();
    if (offset > 0) ends_word[offset - 1] = true;
  }

  std::vector<size_t> cuts;  // number of pred phones before each boundary
  size_t consumed = 0;
  for (const auto& step : path.steps) {
    if (step.pred_index) consumed = *step.pred_index + 1;
    if (step.gold_index && ends_word[*step.gold_index]) cuts.push_back(consumed);
  }

  Transcript out;
  out.language_code = gold.language_code;
  out.utterance_id = gold.utterance_id;
  size_t start = 0;
  for (size_t cut : cuts) {
    if (cut > start) {
      out.words.emplace_back(pred_flat.begin() + start, pred_flat.begin() + cut);
      start = cut;
    }
  }
  if (start < pred_flat.size()) {
    out.words.emplace_back(pred_flat.begin() + start, pred_flat.end());
  }
  return out;
}

void WriteAlignmentTsv(std::ostream& out, const AlignmentPath& path,
                       std::span<const Phone> gold,
                       std::span<const Phone> pred) {
  out << "op\tgold_phone\tpred_phone\tcost\n";
  for (const auto& step : path.steps) {
    out << EditOpName(step.op) << '\t'
        << (step.gold_index ? gold[*step.gold_index].surface : "-") << '\t'
        << (step.pred_index ? pred[*step.pred_index].surface : "-") << '\t'
        << csv::Number(step.cost) << '\n';
  }
}

}  // namespace phonaudit
