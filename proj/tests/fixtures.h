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

// Corpora shared by unit and acceptance tests.

#ifndef PHONAUDIT_TESTS_FIXTURES_H_
#define PHONAUDIT_TESTS_FIXTURES_H_

#include <algorithm>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "phonaudit/annotation.h"
#include "phonaudit/corpus_io.h"

namespace phonaudit::testing {

// Gold transcripts seeded with the three invalid-phone classes seen in G2P
// output: ASCII letters standing in for IPA (g, I, e:), repeated diacritics
// (tˤˤ) and non-standard superscripts (ⁿd, oᵑ).
inline const std::vector<std::string> kDirtyCorpus = {
    "gaɡa tˤˤa",
    "ⁿdoᵑ e:",
    "I ɡɪ pa",
    "tˤˤotˤ gʲa",
    "moᵑ ⁿdi ⁿda",
    "tʃe: kʰaɪ",
};

inline constexpr char kDirtyMapJson[] = R"({
  "g": "ɡ",
  "gʲ": {"target": "ɡʲ", "note": "ASCII g with palatalization"},
  "I": "ɪ",
  "e:": "eː",
  "tˤˤ": {"target": "tˤ", "note": "repeated pharyngealization"},
  "ⁿd": "nd",
  "oᵑ": "oŋ"
})";

// Manifest plus two recognizers whose error rate grows with the language
// index, so per-language medians are spread and the two models correlate.
struct SyntheticCorpus {
  DatasetManifest manifest;
  std::vector<ModelTranscriptSet> models;
};

inline std::string LanguageCode(int i) {
  char code[16];
  std::snprintf(code, sizeof code, "l%02d", i);
  return code;
}

inline SyntheticCorpus MakeSyntheticCorpus(int languages, int per_language,
                                           uint32_t seed = 1) {
  static const char* kPhones[] = {"p", "t", "k", "a", "i", "u", "m", "n",
                                  "s", "l", "ǃ", "tʰ", "aː", "ɡ", "ʃ", "o"};
  std::mt19937 rng(seed);
  auto below = [&](uint32_t n) { return static_cast<uint32_t>(rng() % n); };
  std::vector<ManifestEntry> entries;
  ModelTranscriptSet a{"model_a", {}}, b{"model_b", {}};
  for (int l = 0; l < languages; ++l) {
    const std::string code = LanguageCode(l);
    // Per-mille error rate for this language; model_b is a bit noisier.
    const uint32_t rate = 20 + 400 * l / std::max(1, languages - 1);
    for (int u = 0; u < per_language; ++u) {
      char id[32];
      std::snprintf(id, sizeof id, "%s_u%03d", code.c_str(), u);
      std::vector<std::vector<std::string>> words(1 + below(4));
      for (auto& w : words) {
        w.resize(2 + below(5));
        for (auto& ph : w) ph = kPhones[below(16)];
      }
      std::string gold;
      for (const auto& w : words) {
        if (!gold.empty()) gold += ' ';
        for (const auto& ph : w) gold += ph;
      }
      entries.push_back({id, code, "audio/" + std::string(id) + ".wav", gold,
                         1.0 + below(20)});
      for (ModelTranscriptSet* m : {&a, &b}) {
        const uint32_t r = m == &a ? rate : rate + 60;
        std::string pred;
        for (const auto& w : words) {
          for (const auto& ph : w) {
            uint32_t x = below(1000);
            if (x < r / 4) continue;                    // deletion
            if (x < r) pred += kPhones[below(16)];      // substitution
            else pred += ph;
          }
        }
        m->transcripts[id] = pred;
      }
    }
  }
  return {DatasetManifest(std::move(entries)), {a, b}};
}

// Gold-preference counts out of 20 for 22 audited languages. Only arz, mal
// and eng are known values; the others are placeholders chosen so that ten
// languages sit at or below the critical value of 5.
inline const std::vector<std::pair<std::string, int>> kAuditGoldCounts = {
    {"arz", 0},  {"mal", 2},  {"ben", 1},  {"tam", 3},  {"tel", 4},
    {"urd", 5},  {"pan", 5},  {"mar", 4},  {"guj", 3},  {"kan", 2},
    {"eng", 12}, {"deu", 14}, {"fra", 13}, {"spa", 15}, {"ita", 11},
    {"por", 9},  {"rus", 10}, {"pol", 8},  {"tur", 7},  {"vie", 6},
    {"zul", 16}, {"xho", 15},
};

// Records that resolve to exactly gold_count gold preferences per language;
// every other task of the language resolves to the model.
inline std::vector<PreferenceRecord> RecordsForGoldCounts(
    const std::vector<BlindTask>& tasks, const std::vector<TaskKey>& keys,
    const std::map<std::string, int>& gold_count,
    const std::string& annotator = "ann1") {
  std::map<std::string, bool> a_is_gold;
  for (const TaskKey& k : keys) a_is_gold[k.task_id] = k.a_is_gold;
  std::map<std::string, int> given;
  std::vector<PreferenceRecord> out;
  for (const BlindTask& t : tasks) {
    bool prefer_gold = given[t.language_code]++ < gold_count.at(t.language_code);
    PreferenceRecord r;
    r.task_id = t.task_id;
    r.annotator_id = annotator;
    r.choice = prefer_gold == a_is_gold.at(t.task_id) ? Choice::kPreferA
                                                      : Choice::kPreferB;
    (r.choice == Choice::kPreferA ? r.influential_words_a
                                  : r.influential_words_b)
        .push_back(0);
    out.push_back(std::move(r));
  }
  return out;
}

// A blind task list plus keys with n tasks per language and alternating
// sides, for tests that do not need real transcripts.
inline void MakeTasks(const std::vector<std::string>& languages, int n,
                      std::vector<BlindTask>* tasks,
                      std::vector<TaskKey>* keys) {
  for (const std::string& code : languages) {
    for (int i = 0; i < n; ++i) {
      char id[48];
      std::snprintf(id, sizeof id, "%s-%03d", code.c_str(), i + 1);
      tasks->push_back({id, code, code + "_u" + std::to_string(i),
                        "audio/x.wav", "pa ta", "pata"});
      keys->push_back({id, i % 2 == 0, "model_a"});
    }
  }
}

}  // namespace phonaudit::testing

#endif  // PHONAUDIT_TESTS_FIXTURES_H_
