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

// Global (Needleman-Wunsch) alignment of phone sequences under an
// articulatory feature-distance cost model.

#ifndef PHONAUDIT_ALIGNMENT_H_
#define PHONAUDIT_ALIGNMENT_H_

#include <optional>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "phonaudit/feature_table.h"
#include "phonaudit/phone.h"

namespace phonaudit {

// Substitution cost is the fraction of features on which two phones differ.
// A phone missing from the table costs unknown_phone_cost against anything
// but an identical surface string. Insertions and deletions cost indel_cost.
class CostModel {
 public:
  explicit CostModel(const FeatureTable& table, double indel_cost = 1.0,
                     double unknown_phone_cost = 1.0);

  double Substitution(const Phone& a, const Phone& b) const;
  // Same as Substitution() for phones already resolved against the table.
  double Substitution(const Phone& a, const FeatureVector* fa, const Phone& b,
                      const FeatureVector* fb) const;

  const FeatureTable& table() const { return *table_; }
  double indel_cost() const { return indel_cost_; }
  double unknown_phone_cost() const { return unknown_phone_cost_; }

 private:
  const FeatureTable* table_;
  double indel_cost_;
  double unknown_phone_cost_;
};

enum class EditOp { kMatch, kSubstitute, kInsert, kDelete };

std::string_view EditOpName(EditOp op);

// kDelete consumes a gold phone only, kInsert a predicted phone only.
struct AlignmentStep {
  EditOp op;
  std::optional<size_t> gold_index;
  std::optional<size_t> pred_index;
  double cost;
};

struct AlignmentPath {
  std::vector<AlignmentStep> steps;
  double total_cost = 0.0;
};

// Minimum-cost monotone alignment. Ties in the traceback resolve to
// match/substitute first, then delete, then insert.
AlignmentPath Align(std::span<const Phone> gold, std::span<const Phone> pred,
                    const CostModel& cost);

// Groups the unsegmented prediction into words by closing a word after the
// predicted phone aligned to the last phone of each gold word (or, when that
// gold phone was deleted, after the most recently consumed predicted phone).
// The flattened output always equals pred_flat.
Transcript InduceSpaces(const Transcript& gold,
                        std::span<const Phone> pred_flat,
                        const CostModel& cost);

// Debug dump: op, gold_phone, pred_phone, cost (TSV, "-" for gaps).
void WriteAlignmentTsv(std::ostream& out, const AlignmentPath& path,
                       std::span<const Phone> gold,
                       std::span<const Phone> pred);

}  // namespace phonaudit

#endif  // PHONAUDIT_ALIGNMENT_H_
