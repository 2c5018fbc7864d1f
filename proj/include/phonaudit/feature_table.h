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

#ifndef PHONAUDIT_FEATURE_TABLE_H_
#define PHONAUDIT_FEATURE_TABLE_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace phonaudit {

// Ternary articulatory feature value.
enum class Feature : int8_t { kAbsent = -1, kUnspecified = 0, kPresent = 1 };

using FeatureVector = std::vector<Feature>;

// Number of positions at which two equally sized vectors differ.
int HammingDistance(const FeatureVector& a, const FeatureVector& b);

// Immutable phone -> feature vector lookup. Keys are NFD-normalized and
// case-sensitive. Safe to share across threads once constructed.
//
// On-disk format (TSV): optional leading '#' comment lines, a header row
// whose first cell names the phone column and whose remaining cells name the
// features, then one row per phone with values in {+,-,0}.
class FeatureTable {
 public:
  FeatureTable(std::vector<std::string> feature_names,
               std::vector<std::pair<std::string, FeatureVector>> entries,
               std::string source = {});

  static FeatureTable Parse(std::istream& in, std::string origin = "<stream>");
  static FeatureTable Load(const std::filesystem::path& path);

  // The articulatory table shipped in data/.
  static const FeatureTable& Bundled();
  static std::filesystem::path BundledPath();

  // Looks up an NFD-normalized phone string; nullptr when absent.
  const FeatureVector* Find(std::string_view phone) const;
  bool Contains(std::string_view phone) const { return Find(phone) != nullptr; }

  const std::vector<std::string>& feature_names() const {
    return feature_names_;
  }
  int feature_count() const { return static_cast<int>(feature_names_.size()); }
  size_t size() const { return entries_.size(); }
  // Provenance line from the file header, e.g. the pinned upstream release.
  const std::string& source() const { return source_; }

 private:
  struct StringHash {
    using is_transparent = void;
    size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::vector<std::string> feature_names_;
  std::unordered_map<std::string, FeatureVector, StringHash, std::equal_to<>>
      entries_;
  std::string source_;
};

}  // namespace phonaudit

#endif  // PHONAUDIT_FEATURE_TABLE_H_
