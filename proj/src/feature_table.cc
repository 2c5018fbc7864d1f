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

#include "phonaudit/feature_table.h"

#include <fstream>
#include <sstream>

#include "phonaudit/errors.h"
#include "phonaudit/unicode.h"

namespace phonaudit {
namespace {

std::vector<std::string> SplitTabs(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, '\t')) cells.push_back(cell);
  if (!line.empty() && line.back() == '\t') cells.emplace_back();
  return cells;
}

Feature ParseValue(const std::string& cell, const std::string& where) {
  if (cell == "+") return Feature::kPresent;
  if (cell == "-") return Feature::kAbsent;
  if (cell == "0") return Feature::kUnspecified;
  throw Error(ErrorCode::kMalformedInput,
              where + ": feature value must be +, - or 0, got '" + cell + "'");
}

}  // namespace

int HammingDistance(const FeatureVector& a, const FeatureVector& b) {
  int distance = 0;
  for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (a[i] != b[i]) ++distance;
  }
  return distance;
}

FeatureTable::FeatureTable(
    std::vector<std::string> feature_names,
    std::vector<std::pair<std::string, FeatureVector>> entries,
    std::string source)
    : feature_names_(std::move(feature_names)), source_(std::move(source)) {
  if (feature_names_.empty()) {
    throw Error(ErrorCode::kMalformedInput, "feature table has no features");
  }
  entries_.reserve(entries.size());
  for (auto& [phone, vec] : entries) {
    if (vec.size() != feature_names_.size()) {
      throw Error(ErrorCode::kMalformedInput,
                  "feature vector for '" + phone + "' has " +
                      std::to_string(vec.size()) + " entries, expected " +
                      std::to_string(feature_names_.size()));
    }
    std::string key = unicode::ToNfd(phone);
    auto [it, inserted] = entries_.emplace(key, std::move(vec));
    if (!inserted) {
      throw Error(ErrorCode::kMalformedInput,
                  "duplicate feature table entry '" + key + "'");
    }
  }
}

FeatureTable FeatureTable::Parse(std::istream& in, std::string origin) {
  std::string line;
  std::string source;
  std::vector<std::string> names;
  std::vector<std::pair<std::string, FeatureVector>> entries;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (source.empty() && line.rfind("# source:", 0) == 0) {
        source = line.substr(9);
        if (!source.empty() && source[0] == ' ') source.erase(0, 1);
      }
      continue;
    }
    std::vector<std::string> cells = SplitTabs(line);
    std::string where = origin + ":" + std::to_string(line_no);
    if (names.empty()) {
      if (cells.size() < 2) {
        throw Error(ErrorCode::kMalformedInput, where + ": header too short");
      }
      names.assign(cells.begin() + 1, cells.end());
      continue;
    }
    if (cells.size() != names.size() + 1) {
      throw Error(ErrorCode::kMalformedInput,
                  where + ": expected " + std::to_string(names.size() + 1) +
                      " columns, got " + std::to_string(cells.size()));
    }
    FeatureVector vec;
    vec.reserve(names.size());
    for (size_t i = 1; i < cells.size(); ++i) {
      vec.push_back(ParseValue(cells[i], where));
    }
    entries.emplace_back(cells[0], std::move(vec));
  }
  if (names.empty()) {
    throw Error(ErrorCode::kMalformedInput, origin + ": missing header row");
  }
  return FeatureTable(std::move(names), std::move(entries), std::move(source));
}

FeatureTable FeatureTable::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  }
  return Parse(in, path.string());
}

std::filesystem::path FeatureTable::BundledPath() {
  return std::filesystem::path(PHONAUDIT_DATA_DIR) / "panphon_features.tsv";
}

const FeatureTable& FeatureTable::Bundled() {
  static const FeatureTable table = Load(BundledPath());
  return table;
}

const FeatureVector* FeatureTable::Find(std::string_view phone) const {
  auto it = entries_.find(phone);
  if (it != entries_.end()) return &it->second;
  // Keys are NFD; a miss may be the same phone in another normal form.
  std::string nfd = unicode::ToNfd(phone);
  if (nfd == phone) return nullptr;
  it = entries_.find(nfd);
  return it == entries_.end() ? nullptr : &it->second;
}

}  // namespace phonaudit
