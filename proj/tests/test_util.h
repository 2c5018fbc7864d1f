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

#ifndef PHONAUDIT_TESTS_TEST_UTIL_H_
#define PHONAUDIT_TESTS_TEST_UTIL_H_

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "phonaudit/errors.h"
#include "phonaudit/feature_table.h"
#include "phonaudit/phone.h"

namespace phonaudit::testing {

inline const FeatureTable& Table() {
  static const FeatureTable table = FeatureTable::Bundled();
  return table;
}

inline std::vector<std::string> Surfaces(const std::vector<Phone>& phones) {
  std::vector<std::string> out;
  for (const Phone& p : phones) out.push_back(p.surface);
  return out;
}

inline std::vector<Phone> Phones(const std::vector<std::string>& surfaces) {
  std::vector<Phone> out;
  for (const std::string& s : surfaces) out.push_back(ParsePhone(s));
  return out;
}

inline Transcript T(std::string_view text, std::string language = "xx",
                    std::string id = "u") {
  Transcript t = Tokenize(text);
  t.language_code = std::move(language);
  t.utterance_id = std::move(id);
  return t;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("phonaudit-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

#define EXPECT_ERROR_CODE(stmt, expected_code)                  \
  do {                                                          \
    try {                                                       \
      stmt;                                                     \
      ADD_FAILURE() << "no exception from " #stmt;              \
    } catch (const ::phonaudit::Error& e) {                     \
      EXPECT_EQ(e.code(), expected_code) << e.what();           \
    }                                                           \
  } while (0)

}  // namespace phonaudit::testing

#endif  // PHONAUDIT_TESTS_TEST_UTIL_H_
