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

#include <gtest/gtest.h>

#include "fixtures.h"
#include "phonaudit/census.h"
#include "test_util.h"

namespace phonaudit {
namespace {

using testing::Surfaces;
using testing::T;
using testing::Table;

ReplacementMap DirtyMap() {
  return ReplacementMap::Parse(testing::kDirtyMapJson, Table());
}

TEST(ReplacementMapTest, AsciiG) {
  ReplacementMap map({{"g", "ɡ"}}, Table());
  NormalizeResult r = Normalize(T("gaga"), map, Table());
  EXPECT_EQ(Render(r.transcript), "ɡaɡa");
  EXPECT_EQ(r.applied.at("g"), 2);
  EXPECT_TRUE(r.unmapped.empty());
}

TEST(ReplacementMapTest, RepeatedDiacritic) {
  ReplacementMap map({{"tˤˤ", "tˤ"}}, Table());
  NormalizeResult r = Normalize(T("tˤˤa"), map, Table());
  EXPECT_EQ(Surfaces(r.transcript.Flatten()),
            (std::vector<std::string>{"tˤ", "a"}));
}

TEST(ReplacementMapTest, MultiPhoneTarget) {
  NormalizeResult r = Normalize(T("ⁿdoᵑ"), DirtyMap(), Table());
  EXPECT_EQ(Surfaces(r.transcript.Flatten()),
            (std::vector<std::string>{"n", "d", "o", "ŋ"}));
  EXPECT_EQ(r.transcript.words.size(), 1u);
}

TEST(ReplacementMapTest, ValidTranscriptUnchanged) {
  Transcript t = T("pa tʰa ǃ");
  NormalizeResult r = Normalize(t, DirtyMap(), Table());
  EXPECT_EQ(Render(r.transcript), Render(t));
  EXPECT_TRUE(r.applied.empty());
  EXPECT_TRUE(r.unmapped.empty());
}

TEST(ReplacementMapTest, UnmappedInvalidReported) {
  NormalizeResult r = Normalize(T("zʰa zʰ"), DirtyMap(), Table());
  EXPECT_EQ(r.unmapped.at("zʰ"), 2);
  EXPECT_EQ(Render(r.transcript), "zʰa zʰ");
}

TEST(ReplacementMapTest, Idempotent) {
  ReplacementMap map = DirtyMap();
  for (const std::string& line : testing::kDirtyCorpus) {
    Transcript once = Normalize(T(line), map, Table()).transcript;
    NormalizeResult twice = Normalize(once, map, Table());
    EXPECT_EQ(Render(twice.transcript), Render(once)) << line;
    EXPECT_TRUE(twice.applied.empty()) << line;
  }
}

TEST(ReplacementMapTest, KeepsIds) {
  Transcript t = T("ga", "deu", "u7");
  NormalizeResult r = Normalize(t, DirtyMap(), Table());
  EXPECT_EQ(r.transcript.language_code, "deu");
  EXPECT_EQ(r.transcript.utterance_id, "u7");
}

TEST(ReplacementMapTest, RuleLookupIsNfd) {
  ReplacementMap map = DirtyMap();
  ASSERT_NE(map.Find("tˤˤ"), nullptr);
  EXPECT_EQ(map.Find("tˤˤ")->provenance, "repeated pharyngealization");
  EXPECT_EQ(map.size(), 7u);
}

TEST(ReplacementMapTest, Validation) {
  // Target missing from the table.
  EXPECT_ERROR_CODE(ReplacementMap({{"g", "zʰ"}}, Table()),
                    ErrorCode::kInvalidReplacementMap);
  // Chained rule: a target is also a source.
  EXPECT_ERROR_CODE(ReplacementMap({{"g", "ɡ"}, {"ɡ", "k"}}, Table()),
                    ErrorCode::kInvalidReplacementMap);
  // Source must be one phone.
  EXPECT_ERROR_CODE(ReplacementMap({{"ga", "ɡa"}}, Table()),
                    ErrorCode::kInvalidReplacementMap);
  EXPECT_ERROR_CODE(ReplacementMap::Parse("[1, 2]", Table()),
                    ErrorCode::kInvalidReplacementMap);
  EXPECT_ERROR_CODE(ReplacementMap::Parse("{\"g\": 3}", Table()),
                    ErrorCode::kInvalidReplacementMap);
  EXPECT_ERROR_CODE(ReplacementMap::Parse("{", Table()),
                    ErrorCode::kInvalidReplacementMap);
}

}  // namespace
}  // namespace phonaudit
