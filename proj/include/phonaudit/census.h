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

#ifndef PHONAUDIT_CENSUS_H_
#define PHONAUDIT_CENSUS_H_

#include <cstdint>
#include <map>
#include <ostream>
#include <set>
#include <span>
#include <string>

#include "phonaudit/feature_table.h"
#include "phonaudit/phone.h"

namespace phonaudit {

struct CategoryCount {
  int64_t type_count = 0;
  int64_t token_count = 0;

  bool operator==(const CategoryCount&) const = default;
};

// Phone type/token counts by validity category.
//
// Valid phones with three or more diacritics are counted under
// kValidTwoDiacritics and listed in many_diacritic_types.
class PhoneCensus {
 public:
  PhoneCensus();

  void Add(const Phone& phone, const FeatureTable& table);
  // Associative and commutative; per-shard censuses can be combined in any
  // order.
  void Merge(const PhoneCensus& other);

  const std::map<PhoneCategory, CategoryCount>& per_category() const {
    return per_category_;
  }
  const std::map<std::string, int64_t>& per_phone() const { return per_phone_; }
  PhoneCategory category_of(const std::string& phone) const {
    return phone_category_.at(phone);
  }
  const std::set<std::string>& many_diacritic_types() const {
    return many_diacritic_types_;
  }
  int64_t total_tokens() const;

  // category,type_count,token_count
  void WriteCategoryCsv(std::ostream& out) const;
  // phone,category,token_count,three_plus_diacritics
  void WritePhoneCsv(std::ostream& out) const;

 private:
  void Count(const std::string& surface, PhoneCategory category, bool many,
             int64_t tokens);

  std::map<PhoneCategory, CategoryCount> per_category_;
  std::map<std::string, int64_t> per_phone_;
  std::map<std::string, PhoneCategory> phone_category_;
  std::set<std::string> many_diacritic_types_;
};

PhoneCensus Census(std::span<const Transcript> corpus,
                   const FeatureTable& table);

}  // namespace phonaudit

#endif  // PHONAUDIT_CENSUS_H_
