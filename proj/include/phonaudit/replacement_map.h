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

#ifndef PHONAUDIT_REPLACEMENT_MAP_H_
#define PHONAUDIT_REPLACEMENT_MAP_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "phonaudit/feature_table.h"
#include "phonaudit/phone.h"

namespace phonaudit {

struct ReplacementRule {
  std::string source;           // one phone, NFD
  std::vector<Phone> target;    // one or more table-resolving phones
  std::string provenance;
};

// Curated invalid -> valid phone rewrites.
//
// JSON form: {"<invalid>": "<valid>", ...}. A value may also be an object
// {"target": "<valid>", "note": "<provenance>"}. A target normally holds one
// phone; a run of phones without spaces (e.g. "oŋ") splits one ill-formed
// segment into several valid ones.
//
// Construction enforces that every target phone resolves in the table and
// that no target phone is itself a source, so applying the map is idempotent.
class ReplacementMap {
 public:
  ReplacementMap() = default;
  ReplacementMap(const std::map<std::string, std::string>& rules,
                 const FeatureTable& table);

  static ReplacementMap Parse(std::string_view json_text,
                              const FeatureTable& table);
  static ReplacementMap Load(const std::filesystem::path& path,
                             const FeatureTable& table);

  const ReplacementRule* Find(std::string_view source) const;
  const std::map<std::string, ReplacementRule, std::less<>>& rules() const {
    return rules_;
  }
  size_t size() const { return rules_.size(); }

 private:
  void Add(std::string_view source, std::string_view target,
           std::string provenance, const FeatureTable& table);
  void Validate() const;

  std::map<std::string, ReplacementRule, std::less<>> rules_;
};

struct NormalizeResult {
  Transcript transcript;
  // source phone -> number of rewrites applied.
  std::map<std::string, int64_t> applied;
  // Invalid phones with no rule (UnmappedInvalidPhone warnings) -> count.
  std::map<std::string, int64_t> unmapped;
};

NormalizeResult Normalize(const Transcript& transcript,
                          const ReplacementMap& map,
                          const FeatureTable& table);

}  // namespace phonaudit

#endif  // PHONAUDIT_REPLACEMENT_MAP_H_
