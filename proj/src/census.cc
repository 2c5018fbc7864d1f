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

#include "phonaudit/census.h"

#include "phonaudit/csv.h"

namespace phonaudit {

PhoneCensus::PhoneCensus() {
  for (PhoneCategory c : kAllCategories) per_category_[c] = {};
}

void PhoneCensus::Count(const std::string& surface, PhoneCategory category,
                        bool many, int64_t tokens) {
  auto [it, inserted] = per_phone_.emplace(surface, 0);
  it->second += tokens;
  CategoryCount& bucket = per_category_[category];
  bucket.token_count += tokens;
  if (inserted) {
    ++bucket.type_count;
    phone_category_[surface] = category;
    if (many) many_diacritic_types_.insert(surface);
  }
}

void PhoneCensus::Add(const Phone& phone, const FeatureTable& table) {
  PhoneCategory category = Classify(phone, table);
  bool many = category != PhoneCategory::kInvalid && phone.diacritics.size() > 2;
  Count(phone.surface, category, many, 1);
}

void PhoneCensus::Merge(const PhoneCensus& other) {
  for (const auto& [surface, tokens] : other.per_phone_) {
    Count(surface, other.phone_category_.at(surface),
          other.many_diacritic_types_.contains(surface), tokens);
  }
}

int64_t PhoneCensus::total_tokens() const {
  int64_t total = 0;
  for (const auto& [category, count] : per_category_) total += count.token_count;
  return total;
}

void PhoneCensus::WriteCategoryCsv(std::ostream& out) const {
  out << "category,type_count,token_count\n";
  for (PhoneCategory c : kAllCategories) {
    const CategoryCount& count = per_category_.at(c);
    out << CategoryName(c) << ',' << count.type_count << ','
        << count.token_count << '\n';
  }
}

void PhoneCensus::WritePhoneCsv(std::ostream& out) const {
  out << "phone,category,token_count,three_plus_diacritics\n";
  for (const auto& [surface, tokens] : per_phone_) {
    out << csv::Field(surface) << ',' << CategoryName(phone_category_.at(surface))
        << ',' << tokens << ','
        << (many_diacritic_types_.contains(surface) ? 1 : 0) << '\n';
  }
}

PhoneCensus Census(std::span<const Transcript> corpus,
                   const FeatureTable& table) {
  PhoneCensus census;
  for (const Transcript& t : corpus) {
    for (const auto& word : t.words) {
      for (const Phone& phone : word) census.Add(phone, table);
    }
  }
  return census;
}

}  // namespace phonaudit
