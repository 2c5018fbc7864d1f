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

#include "phonaudit/audit_pipeline.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "fixtures.h"
#include "test_util.h"

namespace phonaudit {
namespace {

using testing::Table;

class PipelineTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    corpus_ = new testing::SyntheticCorpus(testing::MakeSyntheticCorpus(12, 25));
  }
  static void TearDownTestSuite() { delete corpus_; }

  const DatasetManifest& manifest() const { return corpus_->manifest; }
  const std::vector<ModelTranscriptSet>& models() const {
    return corpus_->models;
  }

  CostModel cost_{Table()};
  static testing::SyntheticCorpus* corpus_;
};

testing::SyntheticCorpus* PipelineTest::corpus_ = nullptr;

TEST_F(PipelineTest, ScoreLanguagesShape) {
  LanguageScores s = ScoreLanguages(manifest(), models(), cost_);
  EXPECT_EQ(s.model_ids, (std::vector<std::string>{"model_a", "model_b"}));
  EXPECT_EQ(s.table.size(), 12u);
  EXPECT_EQ(s.utterances.at("model_a").size(), 12u * 25u);
  const ModelLanguageScore& cell = s.table.at("l00").at("model_a");
  EXPECT_EQ(cell.covered, 25);
  EXPECT_EQ(cell.total, 25);
  EXPECT_EQ(cell.normalized.n_utterances, 25);
  // Error rate rises with the language index in both models.
  ASSERT_TRUE(s.correlations.at({"model_a", "model_b"}));
  EXPECT_GT(*s.correlations.at({"model_a", "model_b"}), 0.8);
  EXPECT_LT(s.Median("l00", "model_a"), s.Median("l11", "model_a"));
}

TEST_F(PipelineTest, ScoreMatchesDirectAggregation) {
  LanguageScores s = ScoreLanguages(manifest(), models(), cost_);
  std::vector<UtteranceScore> l03;
  for (const ManifestEntry* e : manifest().ForLanguage("l03")) {
    Transcript gold = Tokenize(e->gold);
    l03.push_back(Pfer(
        gold, TokenizeOrEmpty(models()[1].transcripts.at(e->utterance_id)),
        cost_));
  }
  EXPECT_EQ(s.Median("l03", "model_b"), AggregateLanguage(l03).median_pfer);
}

TEST_F(PipelineTest, CoverageErrors) {
  std::vector<ModelTranscriptSet> partial = models();
  partial[0].transcripts.erase("l02_u004");
  EXPECT_ERROR_CODE(ScoreLanguages(manifest(), partial, cost_),
                    ErrorCode::kMissingPredictions);
  LanguageScores relaxed = ScoreLanguages(manifest(), partial, cost_, 0.9);
  EXPECT_EQ(relaxed.table.at("l02").at("model_a").covered, 24);

  std::vector<ModelTranscriptSet> extra = models();
  extra[1].transcripts["nowhere"] = "pa";
  EXPECT_ERROR_CODE(ScoreLanguages(manifest(), extra, cost_),
                    ErrorCode::kMalformedInput);
  EXPECT_ERROR_CODE(
      ScoreLanguages(manifest(), std::vector<ModelTranscriptSet>{}, cost_),
      ErrorCode::kMissingPredictions);
}

// Independent restatement of the selection rule over the per-model medians.
std::set<std::string> ExpectedSelection(const LanguageScores& s, double q) {
  std::set<std::string> out;
  for (const std::string& model : s.model_ids) {
    std::vector<double> m;
    for (const auto& [lang, row] : s.table) m.push_back(row.at(model).normalized.median_pfer);
    std::sort(m.begin(), m.end());
    double h = (m.size() - 1) * q;
    size_t lo = static_cast<size_t>(h);
    double t = lo + 1 < m.size() ? m[lo] + (h - lo) * (m[lo + 1] - m[lo]) : m[lo];
    for (const auto& [lang, row] : s.table) {
      if (row.at(model).normalized.median_pfer > t) out.insert(lang);
    }
  }
  return out;
}

TEST_F(PipelineTest, Selection) {
  LanguageScores s = ScoreLanguages(manifest(), models(), cost_);
  for (double q : {0.5, 2.0 / 3.0, 0.75, 0.9}) {
    AuditSelection sel = SelectAuditLanguages(s, q);
    std::set<std::string> got(sel.selected.begin(), sel.selected.end());
    EXPECT_EQ(got, ExpectedSelection(s, q)) << q;
    EXPECT_TRUE(std::is_sorted(sel.selected.begin(), sel.selected.end()));
    EXPECT_EQ(sel.thresholds.size(), 2u);
  }
  EXPECT_EQ(SelectAuditLanguages(s, 0.0).selected.size(), 12u);
  EXPECT_ERROR_CODE(SelectAuditLanguages(s, 1.0), ErrorCode::kDomainError);
  EXPECT_ERROR_CODE(SelectAuditLanguages(s, -0.1), ErrorCode::kDomainError);
}

TEST_F(PipelineTest, BestModel) {
  LanguageScores s = ScoreLanguages(manifest(), models(), cost_);
  for (const auto& [lang, row] : s.table) {
    std::string best = BestModel(s, lang);
    for (const auto& [model, cell] : row) {
      EXPECT_LE(row.at(best).normalized.median_pfer,
                cell.normalized.median_pfer);
    }
  }
  // Tie goes to the lexicographically smaller id.
  std::vector<ModelTranscriptSet> twins = {models()[0], models()[0]};
  twins[0].model_id = "zeta";
  twins[1].model_id = "alpha";
  LanguageScores t = ScoreLanguages(manifest(), twins, cost_);
  EXPECT_EQ(BestModel(t, "l05"), "alpha");
  EXPECT_ERROR_CODE(BestModel(t, "nope"), ErrorCode::kMissingPredictions);
}

TEST(SeededRngTest, BelowStaysInRange) {
  SeededRng rng(42, "l00");
  std::vector<int> counts(7);
  for (int i = 0; i < 7000; ++i) ++counts[rng.Below(7)];
  for (int c : counts) EXPECT_GT(c, 850);
  EXPECT_ERROR_CODE(rng.Below(0), ErrorCode::kDomainError);
}

TEST(SeededRngTest, StreamsDiffer) {
  SeededRng a(42, "l00"), b(42, "l01"), c(42, "l00");
  uint64_t x = a.Next();
  EXPECT_NE(x, b.Next());
  EXPECT_EQ(x, c.Next());
}

TEST_F(PipelineTest, SampleTasksDeterministic) {
  auto t1 = SampleTasks(manifest(), "l04", models()[0], 20, 7, cost_);
  auto t2 = SampleTasks(manifest(), "l04", models()[0], 20, 7, cost_);
  auto t3 = SampleTasks(manifest(), "l04", models()[0], 20, 8, cost_);
  std::vector<BlindTask> b1, b2, b3;
  std::vector<TaskKey> k1, k2;
  SplitTasks(t1, &b1, &k1);
  SplitTasks(t2, &b2, &k2);
  SplitTasks(t3, &b3, nullptr);
  EXPECT_EQ(TasksJsonl(b1), TasksJsonl(b2));
  EXPECT_EQ(KeysJsonl(k1), KeysJsonl(k2));
  EXPECT_NE(TasksJsonl(b1), TasksJsonl(b3));
}

TEST_F(PipelineTest, SampleTasksContent) {
  auto tasks = SampleTasks(manifest(), "l04", models()[0], 20, 7, cost_);
  ASSERT_EQ(tasks.size(), 20u);
  EXPECT_EQ(tasks[0].view.task_id, "l04-001");
  EXPECT_EQ(tasks[19].view.task_id, "l04-020");
  std::set<std::string> utterances;
  for (const AnnotationTask& t : tasks) {
    utterances.insert(t.view.utterance_id);
    const ManifestEntry* e = manifest().Find(t.view.utterance_id);
    ASSERT_NE(e, nullptr);
    EXPECT_EQ(e->language_code, "l04");
    EXPECT_EQ(t.model_id, "model_a");
    const std::string& gold_side =
        t.a_is_gold ? t.view.transcript_a : t.view.transcript_b;
    const std::string& model_side =
        t.a_is_gold ? t.view.transcript_b : t.view.transcript_a;
    EXPECT_EQ(gold_side, Render(Tokenize(e->gold)));
    // The model side is the prediction with spaces induced.
    std::string joined = model_side;
    joined.erase(std::remove(joined.begin(), joined.end(), ' '), joined.end());
    EXPECT_EQ(joined,
              RenderPhones(TokenizeOrEmpty(models()[0].transcripts.at(
                                               t.view.utterance_id))
                               .Flatten()));
  }
  EXPECT_EQ(utterances.size(), 20u);
}

TEST_F(PipelineTest, SampleTasksErrors) {
  EXPECT_ERROR_CODE(SampleTasks(manifest(), "l04", models()[0], 26, 7, cost_),
                    ErrorCode::kInsufficientUtterances);
  EXPECT_ERROR_CODE(SampleTasks(manifest(), "zzz", models()[0], 1, 7, cost_),
                    ErrorCode::kInsufficientUtterances);
  EXPECT_ERROR_CODE(SampleTasks(manifest(), "l04", models()[0], 0, 7, cost_),
                    ErrorCode::kDomainError);
}

TEST(SampleBalanceTest, SidesAreBalanced) {
  testing::SyntheticCorpus c = testing::MakeSyntheticCorpus(50, 20, 5);
  CostModel cost(Table());
  int gold_a = 0, total = 0;
  for (const std::string& lang : c.manifest.languages()) {
    for (const AnnotationTask& t :
         SampleTasks(c.manifest, lang, c.models[0], 20, 2024, cost)) {
      gold_a += t.a_is_gold;
      ++total;
    }
  }
  ASSERT_EQ(total, 1000);
  double expected = total / 2.0;
  double chi2 = 2 * (gold_a - expected) * (gold_a - expected) / expected;
  // chi-square, 1 degree of freedom, p = 0.001.
  EXPECT_LT(chi2, 10.828) << gold_a;
}

TEST(CompileReportTest, CountsAndOrdering) {
  std::vector<BlindTask> tasks;
  std::vector<TaskKey> keys;
  testing::MakeTasks({"aaa", "bbb", "ccc"}, 20, &tasks, &keys);
  auto records = testing::RecordsForGoldCounts(
      tasks, keys, {{"aaa", 4}, {"bbb", 2}, {"ccc", 12}});
  AuditReport r = CompileReport(tasks, keys, records, TestConfig{});
  EXPECT_EQ(r.audited_languages, (std::vector<std::string>{"aaa", "bbb", "ccc"}));
  EXPECT_EQ(r.flagged_languages, (std::vector<std::string>{"bbb", "aaa"}));
  EXPECT_TRUE(r.insufficient_languages.empty());
  EXPECT_EQ(r.languages.at("aaa").counts.gold_preferred, 4);
  EXPECT_EQ(r.languages.at("aaa").counts.model_preferred, 16);
  EXPECT_EQ(r.languages.at("ccc").status, LanguageStatus::kPass);
  EXPECT_EQ(r.languages.at("ccc").verdict->critical_value, 5);
}

TEST(CompileReportTest, Insufficient) {
  std::vector<BlindTask> tasks;
  std::vector<TaskKey> keys;
  testing::MakeTasks({"aaa"}, 20, &tasks, &keys);
  auto records = testing::RecordsForGoldCounts(tasks, keys, {{"aaa", 10}});
  for (int i = 0; i < 6; ++i) {
    records[i].choice = Choice::kTiePoor;
    records[i].influential_words_a.clear();
    records[i].influential_words_b.clear();
  }
  AuditReport r = CompileReport(tasks, keys, records, TestConfig{});
  EXPECT_EQ(r.insufficient_languages, (std::vector<std::string>{"aaa"}));
  EXPECT_EQ(r.languages.at("aaa").status,
            LanguageStatus::kInsufficientAnnotations);
  EXPECT_FALSE(r.languages.at("aaa").verdict);
  EXPECT_EQ(r.languages.at("aaa").counts.abstain_poor, 6);
  // Tasks without any record also leave the language short.
  AuditReport none = CompileReport(tasks, keys, {}, TestConfig{});
  EXPECT_EQ(none.insufficient_languages.size(), 1u);
}

TEST(CompileReportTest, Errors) {
  std::vector<BlindTask> tasks;
  std::vector<TaskKey> keys;
  testing::MakeTasks({"aaa"}, 20, &tasks, &keys);
  auto records = testing::RecordsForGoldCounts(tasks, keys, {{"aaa", 10}});

  auto stray = records;
  stray[0].task_id = "zzz-001";
  EXPECT_ERROR_CODE(CompileReport(tasks, keys, stray, TestConfig{}),
                    ErrorCode::kUnknownTask);

  auto twice = records;
  twice.push_back(records[3]);
  EXPECT_ERROR_CODE(CompileReport(tasks, keys, twice, TestConfig{}),
                    ErrorCode::kDuplicateRecord);

  // A second annotator on the same task is fine.
  auto second = records;
  second.push_back(records[3]);
  second.back().annotator_id = "ann2";
  EXPECT_EQ(CompileReport(tasks, keys, second, TestConfig{})
                .languages.at("aaa")
                .counts.total(),
            21);

  auto missing_key = keys;
  missing_key.pop_back();
  EXPECT_ERROR_CODE(CompileReport(tasks, missing_key, records, TestConfig{}),
                    ErrorCode::kMalformedInput);
}

TEST(CompileReportTest, JsonRoundTrip) {
  std::vector<BlindTask> tasks;
  std::vector<TaskKey> keys;
  testing::MakeTasks({"aaa", "bbb"}, 20, &tasks, &keys);
  auto records =
      testing::RecordsForGoldCounts(tasks, keys, {{"aaa", 3}, {"bbb", 9}});
  AuditReport r = CompileReport(tasks, keys, records, TestConfig{});
  nlohmann::json j = ToJson(r);
  EXPECT_FALSE(j.dump().find("a_is_gold") != std::string::npos);
  EXPECT_EQ(j.at("languages").at("aaa").at("status"), "flag");
  AuditReport back = ReportFromJson(j);
  EXPECT_EQ(back.flagged_languages, r.flagged_languages);
  EXPECT_EQ(back.audited_languages, r.audited_languages);
  EXPECT_EQ(back.config.alpha, r.config.alpha);
}

TEST(FilterManifestTest, DropsFlaggedOnly) {
  testing::SyntheticCorpus c = testing::MakeSyntheticCorpus(77, 3);
  AuditReport report;
  for (int i = 0; i < 10; ++i) {
    report.flagged_languages.push_back(testing::LanguageCode(i * 7));
  }
  FilterResult f = FilterManifest(c.manifest, report);
  EXPECT_EQ(f.manifest.languages().size(), 67u);
  EXPECT_EQ(f.manifest.size(), 67u * 3);
  EXPECT_EQ(f.removed.size(), 10u);
  EXPECT_EQ(f.removed.at("l07"), 3);
  EXPECT_FALSE(f.empty);
  // Survivors keep their order.
  std::vector<std::string> expected;
  for (const ManifestEntry& e : c.manifest.entries()) {
    if (!f.removed.contains(e.language_code)) expected.push_back(e.utterance_id);
  }
  std::vector<std::string> got;
  for (const ManifestEntry& e : f.manifest.entries()) got.push_back(e.utterance_id);
  EXPECT_EQ(got, expected);
}

TEST(FilterManifestTest, EverythingFlagged) {
  testing::SyntheticCorpus c = testing::MakeSyntheticCorpus(2, 3);
  AuditReport report;
  report.flagged_languages = {"l00", "l01"};
  FilterResult f = FilterManifest(c.manifest, report);
  EXPECT_TRUE(f.empty);
  EXPECT_EQ(f.manifest.size(), 0u);
}

}  // namespace
}  // namespace phonaudit
