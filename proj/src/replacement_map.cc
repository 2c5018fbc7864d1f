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

#include "phonaudit/replacement_map.h"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "phonaudit/errors.h"
#include "phonaudit/unicode.h"

namespace phonaudit {

ReplacementMap::ReplacementMap(const std::map<std::string, std::string>& rules,
                               const FeatureTable& table) {
  for (const auto& [source, target] : rules) Add(source, target, {}, table);
  Validate();
}

void ReplacementMap::Add(std::string_view source, std::string_view target,
                         std::string provenance, const FeatureTable& table) {
  std::vector<Phone> source_phones = TokenizeWord(source);
  if (source_phones.size() != 1) {
    throw Error(ErrorCode::kInvalidReplacementMap,
                "source '" + std::string(source) + "' is not a single phone");
  }
  ReplacementRule rule;
  rule.source = source_phones.front().surface;
  rule.target = TokenizeWord(target);
  rule.provenance = std::move(provenance);
  if (rule.target.empty()) {
    throw Error(ErrorCode::kInvalidReplacementMap,
                "rule for '" + rule.source + "' has an empty target");
  }
  for (const Phone& phone : rule.target) {
    if (!table.Contains(phone.surface)) {
      throw Error(ErrorCode::kInvalidReplacementMap,
                  "target '" + phone.surface + "' of rule '" + rule.source +
                      "' is not in the feature table");
    }
  }
  std::string key = rule.source;
  if (!rules_.emplace(key, std::move(rule)).second) {
    throw Error(ErrorCode::kInvalidReplacementMap,
                "duplicate source '" + key + "' after NFD normalization");
  }
}

void ReplacementMap::Validate() const {
  for (const auto& [source, rule] : rules_) {
    for (const Phone& phone : rule.target) {
      if (rules_.contains(phone.surface)) {
        throw Error(ErrorCode::kInvalidReplacementMap,
                    "target '" + phone.surface + "' of rule '" + source +
                        "' is also a source");
      }
    }
  }
}

ReplacementMap ReplacementMap::Parse(std::string_view json_text,
                                     const FeatureTable& table) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kInvalidReplacementMap, e.what());
  }
  if (!doc.is_object()) {
    throw Error(ErrorCode::kInvalidReplacementMap, "expected a JSON object");
  }
  ReplacementMap map;
  for (const auto& [source, value] : doc.items()) {
    if (value.is_string()) {
      map.Add(source, value.get<std::string>(), {}, table);
    } else if (value.is_object() && value.contains("target") &&
               value["target"].is_string()) {
      map.Add(source, value["target"].get<std::string>(),
              value.value("note", std::string()), table);
    } else {
      throw Error(ErrorCode::kInvalidReplacementMap,
                  "rule for '" + source + "' must be a string or object");
    }
  }
  map.Validate();
  return map;
}

ReplacementMap ReplacementMap::Load(const std::filesystem::path& path,
                                    const FeatureTable& table) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return Parse(buffer.str(), table);
}

const ReplacementRule* ReplacementMap::Find(std::string_view source) const {
  auto it = rules_.find(source);
  return it == rules_.end() ? nullptr : &it->second;
}

NormalizeResult Normalize(const Transcript& transcript,
                          const ReplacementMap& map,
                          const FeatureTable& table) {
  NormalizeResult result;
  result.transcript.language_code = transcript.language_code;
  result.transcript.utterance_id = transcript.utterance_id;
  result.transcript.words.reserve(transcript.words.size());
  for (const auto& word : transcript.words) {
    std::vector<Phone> out;
    out.reserve(word.size());
    for (const Phone& phone : word) {
      if (const ReplacementRule* rule = map.Find(phone.surface)) {
        out.insert(out.end(), rule->target.begin(), rule->target.end());
        ++result.applied[rule->source];
        continue;
      }
      if (Classify(phone, table) == PhoneCategory::kInvalid) {
        ++result.unmapped[phone.surface];
      }
      out.push_back(phone);
    }
    result.transcript.words.push_back(std::move(out));
  }
  return result;
}

}  // namespace phonaudit
