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

// phonaudit: command-line front end.

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "phonaudit/alignment.h"
#include "phonaudit/annotation_service.h"
#include "phonaudit/audit_pipeline.h"
#include "phonaudit/census.h"
#include "phonaudit/corpus_io.h"
#include "phonaudit/csv.h"
#include "phonaudit/errors.h"
#include "phonaudit/feature_table.h"
#include "phonaudit/http_frontend.h"
#include "phonaudit/metrics.h"
#include "phonaudit/phone.h"
#include "phonaudit/ppt_stats.h"
#include "phonaudit/replacement_map.h"
#include "phonaudit/unicode.h"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace phonaudit;

namespace {

struct Common {
  std::string features;
  double indel_cost = 1.0;
  double unknown_cost = 1.0;

  FeatureTable Table() const {
    return features.empty() ? FeatureTable::Bundled()
                            : FeatureTable::Load(features);
  }
};

void Emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-") {
    std::cout << content;
  } else {
    WriteFileAtomic(out_path, content);
  }
}

std::vector<Transcript> GoldCorpus(const DatasetManifest& manifest) {
  std::vector<Transcript> corpus;
  for (const ManifestEntry& e : manifest.entries()) {
    Transcript t = TokenizeOrEmpty(e.gold);
    t.language_code = e.language_code;
    t.utterance_id = e.utterance_id;
    corpus.push_back(std::move(t));
  }
  return corpus;
}

std::vector<ModelTranscriptSet> Models(const std::string& path) {
  std::vector<ModelTranscriptSet> out;
  for (auto& [id, set] : LoadModelTranscripts(path)) out.push_back(set);
  return out;
}

TestConfig LoadConfig(const std::string& path) {
  if (path.empty()) return {};
  TestConfig config = TestConfigFromJson(json::parse(ReadFile(path)));
  config.Validate();
  return config;
}

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    std::string canon = unicode::Canonicalize(item);
    if (!canon.empty()) out.push_back(canon);
  }
  return out;
}

// ---- census / normalize ---------------------------------------------------

int RunCensus(const Common& common, const std::string& manifest_path,
              const std::string& out_dir) {
  FeatureTable table = common.Table();
  auto manifest = DatasetManifest::Load(manifest_path);
  PhoneCensus census = Census(GoldCorpus(manifest), table);
  std::ostringstream categories, phones;
  census.WriteCategoryCsv(categories);
  census.WritePhoneCsv(phones);
  if (out_dir.empty()) {
    std::cout << categories.str();
    return 0;
  }
  fs::create_directories(out_dir);
  WriteFileAtomic(fs::path(out_dir) / "census_categories.csv", categories.str());
  WriteFileAtomic(fs::path(out_dir) / "census_phones.csv", phones.str());
  std::cerr << "census: " << census.total_tokens() << " tokens, "
            << census.per_phone().size() << " types\n";
  return 0;
}

int RunNormalize(const Common& common, const std::string& manifest_path,
                 const std::string& map_path, const std::string& out_dir) {
  FeatureTable table = common.Table();
  auto manifest = DatasetManifest::Load(manifest_path);
  ReplacementMap map = ReplacementMap::Load(map_path, table);

  std::vector<ManifestEntry> entries;
  std::vector<Transcript> normalized;
  std::map<std::string, int64_t> applied, unmapped;
  for (const ManifestEntry& e : manifest.entries()) {
    ManifestEntry out = e;
    Transcript t = TokenizeOrEmpty(e.gold);
    NormalizeResult r = Normalize(t, map, table);
    for (const auto& [k, v] : r.applied) applied[k] += v;
    for (const auto& [k, v] : r.unmapped) unmapped[k] += v;
    out.gold = Render(r.transcript);
    normalized.push_back(std::move(r.transcript));
    entries.push_back(std::move(out));
  }
  DatasetManifest result(std::move(entries));
  PhoneCensus before = Census(GoldCorpus(manifest), table);
  PhoneCensus after = Census(normalized, table);

  fs::create_directories(out_dir);
  WriteFileAtomic(fs::path(out_dir) / "manifest.jsonl", ManifestJsonl(result));
  std::ostringstream categories, phones;
  after.WriteCategoryCsv(categories);
  after.WritePhoneCsv(phones);
  WriteFileAtomic(fs::path(out_dir) / "census_categories.csv", categories.str());
  WriteFileAtomic(fs::path(out_dir) / "census_phones.csv", phones.str());
  auto category_json = [](const PhoneCensus& c) {
    json j = json::object();
    for (const auto& [cat, count] : c.per_category()) {
      j[std::string(CategoryName(cat))] = {{"type_count", count.type_count},
                                           {"token_count", count.token_count}};
    }
    return j;
  };
  json report = {{"rules", map.size()},
                 {"applied", applied},
                 {"unmapped_invalid", unmapped},
                 {"before", category_json(before)},
                 {"after", category_json(after)}};
  WriteFileAtomic(fs::path(out_dir) / "normalize_report.json",
                  report.dump(2) + "\n");
  std::cerr << "normalize: " << applied.size() << " rules fired, "
            << unmapped.size() << " invalid types left unmapped\n";
  return 0;
}

// ---- benchmark ------------------------------------------------------------

void WriteBenchmark(const fs::path& dir, const DatasetManifest& manifest,
                    const ModelTranscriptSet& model, const CostModel& cost,
                    const std::vector<std::string>& phones) {
  fs::create_directories(dir);
  std::ostringstream utt;
  utt << "language,utterance_id,pfer_raw,pfer_normalized\n";
  std::map<std::string, std::vector<UtteranceScore>> by_language;
  std::vector<AlignedPair> pairs;
  for (const ManifestEntry& e : manifest.entries()) {
    auto it = model.transcripts.find(e.utterance_id);
    if (it == model.transcripts.end()) continue;
    Transcript gold = TokenizeOrEmpty(e.gold);
    gold.language_code = e.language_code;
    gold.utterance_id = e.utterance_id;
    if (gold.PhoneCount() == 0) continue;
    Transcript pred = TokenizeOrEmpty(it->second);
    UtteranceScore s = Pfer(gold, pred, cost);
    utt << csv::Field(e.language_code) << ',' << csv::Field(e.utterance_id)
        << ',' << csv::Number(s.pfer_raw) << ','
        << csv::Number(s.pfer_normalized) << '\n';
    by_language[e.language_code].push_back(s);
    pairs.push_back(AlignPair(gold, pred, cost));
  }
  WriteFileAtomic(dir / "utterances.csv", utt.str());

  std::ostringstream lang;
  lang << "language,median,iqr,n\n";
  for (const auto& [code, scores] : by_language) {
    LanguageAggregate a = AggregateLanguage(scores);
    lang << csv::Field(code) << ',' << csv::Number(a.median_pfer) << ','
         << csv::Number(a.iqr_pfer) << ',' << a.n_utterances << '\n';
  }
  WriteFileAtomic(dir / "languages.csv", lang.str());

  std::map<std::string, PhoneErrorProfile> profiles =
      phones.empty() ? PhoneProfiles(pairs)
                     : PhoneRecall(pairs, {phones.begin(), phones.end()});
  std::ostringstream ph;
  ph << "phone,freq,epr,recall,majority_label\n";
  for (const auto& [phone, p] : profiles) {
    ph << csv::Field(phone) << ',' << p.occurrence_count << ','
       << csv::Number(p.expected_error) << ',' << csv::Number(p.recall) << ','
       << csv::Field(p.majority_label.value_or(kGapLabel)) << '\n';
  }
  WriteFileAtomic(dir / "phones.csv", ph.str());
}

int RunBenchmark(const Common& common, const std::string& manifest_path,
                 const std::string& pred_path, const std::string& out_dir,
                 const std::string& phone_list) {
  FeatureTable table = common.Table();
  CostModel cost(table, common.indel_cost, common.unknown_cost);
  auto manifest = DatasetManifest::Load(manifest_path);
  auto models = Models(pred_path);
  std::vector<std::string> phones = SplitList(phone_list);
  json meta = {{"quantile_rule", kQuantileRule},
               {"indel_cost", common.indel_cost},
               {"unknown_phone_cost", common.unknown_cost},
               {"feature_source", table.source()},
               {"models", json::array()}};
  for (const ModelTranscriptSet& m : models) {
    WriteBenchmark(fs::path(out_dir) / m.model_id, manifest, m, cost, phones);
    meta["models"].push_back(m.model_id);
  }
  fs::create_directories(out_dir);
  WriteFileAtomic(fs::path(out_dir) / "meta.json", meta.dump(2) + "\n");
  return 0;
}

// ---- power ----------------------------------------------------------------

int RunPower(TestConfig config, int n_min, int n_max, int n_step) {
  config.Validate();
  if (n_min < 1 || n_max < n_min || n_step < 1) {
    throw Error(ErrorCode::kDomainError, "need 1 <= n-min <= n-max, n-step >= 1");
  }
  std::vector<int> ns;
  for (int n = n_min; n <= n_max; n += n_step) ns.push_back(n);
  std::cout << "n\tk\tpower\ttype1\n";
  char line[128];
  for (const PowerRow& row : SampleSizeTable(config, ns)) {
    std::snprintf(line, sizeof line, "%d\t%d\t%.6f\t%.6f\n", row.n, row.k,
                  row.power, row.type1);
    std::cout << line;
  }
  return 0;
}

// ---- audit ----------------------------------------------------------------

struct AuditArgs {
  std::string manifest;
  std::string pred;
  std::string config;
  std::string out;
  std::string selection;
  std::string tasks;
  std::string keys;
  std::vector<std::string> records;
  std::string report;
  double quantile = 0.75;
  double min_coverage = 1.0;
  int n = 0;
  uint64_t seed = 0;
};

LanguageScores Score(const Common& common, const FeatureTable& table,
                     const AuditArgs& a) {
  CostModel cost(table, common.indel_cost, common.unknown_cost);
  auto manifest = DatasetManifest::Load(a.manifest);
  auto models = Models(a.pred);
  return ScoreLanguages(manifest, models, cost, a.min_coverage);
}

int RunAuditScore(const Common& common, const AuditArgs& a) {
  FeatureTable table = common.Table();
  Emit(a.out, ToJson(Score(common, table, a)).dump(2) + "\n");
  return 0;
}

int RunAuditSelect(const Common& common, const AuditArgs& a) {
  FeatureTable table = common.Table();
  LanguageScores scores = Score(common, table, a);
  AuditSelection selection = SelectAuditLanguages(scores, a.quantile);
  Emit(a.out, SelectionWithModels(selection, scores).dump(2) + "\n");
  std::cerr << "select: " << selection.selected.size() << " of "
            << scores.table.size() << " languages\n";
  return 0;
}

int RunAuditSample(const Common& common, const AuditArgs& a) {
  FeatureTable table = common.Table();
  CostModel cost(table, common.indel_cost, common.unknown_cost);
  auto manifest = DatasetManifest::Load(a.manifest);
  auto models = LoadModelTranscripts(a.pred);
  json selection = json::parse(ReadFile(a.selection));
  TestConfig config = LoadConfig(a.config);
  int n = a.n > 0 ? a.n : config.sample_size;

  std::vector<AnnotationTask> tasks;
  for (const auto& [language, model_id] : selection.at("best_model").items()) {
    auto it = models.find(model_id.get<std::string>());
    if (it == models.end()) {
      throw Error(ErrorCode::kMissingPredictions,
                  "no transcripts for model " + model_id.get<std::string>());
    }
    auto drawn = SampleTasks(manifest, language, it->second, n, a.seed, cost);
    tasks.insert(tasks.end(), drawn.begin(), drawn.end());
  }
  std::vector<BlindTask> blind;
  std::vector<TaskKey> keys;
  SplitTasks(tasks, &blind, &keys);
  fs::create_directories(a.out);
  WriteFileAtomic(fs::path(a.out) / "tasks.jsonl", TasksJsonl(blind));
  WriteFileAtomic(fs::path(a.out) / "keys.jsonl", KeysJsonl(keys));
  std::cerr << "sample: " << blind.size() << " tasks\n";
  return 0;
}

int RunAuditVerdict(const Common& common, const AuditArgs& a) {
  TestConfig config = LoadConfig(a.config);
  auto tasks = LoadTasks(a.tasks);
  auto keys = LoadKeys(a.keys);
  std::vector<PreferenceRecord> records;
  for (const std::string& path : a.records) {
    auto part = LoadRecords(path);
    records.insert(records.end(), part.begin(), part.end());
  }
  std::optional<LanguageScores> scores;
  if (!a.manifest.empty() && !a.pred.empty()) {
    FeatureTable table = common.Table();
    scores = Score(common, table, a);
  }
  AuditReport report = CompileReport(tasks, keys, records, config,
                                     scores ? &*scores : nullptr);
  Emit(a.out, ToJson(report).dump(2) + "\n");
  std::cerr << "verdict: " << report.flagged_languages.size() << " flagged, "
            << report.insufficient_languages.size()
            << " insufficient, of " << report.audited_languages.size() << "\n";
  return 0;
}

int RunAuditFilter(const AuditArgs& a) {
  auto manifest = DatasetManifest::Load(a.manifest);
  AuditReport report = ReportFromJson(json::parse(ReadFile(a.report)));
  FilterResult result = FilterManifest(manifest, report);
  Emit(a.out, ManifestJsonl(result.manifest));
  std::cerr << "filter: kept " << result.manifest.size() << " entries, removed "
            << result.removed.size() << " languages\n";
  if (result.empty) std::cerr << "filter: warning: manifest is now empty\n";
  return 0;
}

int RunAgreement(const std::string& a, const std::string& b) {
  auto ra = LoadRecords(a);
  auto rb = LoadRecords(b);
  std::printf("%.6f\n", Agreement(ra, rb));
  return 0;
}

// ---- serve ----------------------------------------------------------------

HttpFrontend* g_frontend = nullptr;

void HandleSignal(int) {
  if (g_frontend != nullptr) g_frontend->Stop();
}

int RunServe(const std::string& manifest_path, const std::string& state_dir,
             const std::string& audio_root, const std::string& host, int port) {
  AnnotationService service(state_dir, DatasetManifest::Load(manifest_path),
                            audio_root);
  HttpFrontend frontend(service);
  if (port == 0) {
    port = frontend.BindToAnyPort(host);
    if (port < 0) throw Error(ErrorCode::kIoError, "cannot bind " + host);
  } else if (!frontend.Bind(host, port)) {
    throw Error(ErrorCode::kIoError,
                "cannot bind " + host + ":" + std::to_string(port));
  }
  g_frontend = &frontend;
  std::signal(SIGINT, HandleSignal);
  std::signal(SIGTERM, HandleSignal);
  std::cerr << "serving on http://" << host << ":" << port << "\n";
  frontend.ListenAfterBind();
  g_frontend = nullptr;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quality audits for multilingual phonetic transcript corpora"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--features", common.features,
                 "feature table TSV (default: bundled panphon table)");
  app.add_option("--indel-cost", common.indel_cost, "insertion/deletion cost");
  app.add_option("--unknown-cost", common.unknown_cost,
                 "substitution cost involving a phone missing from the table");

  std::string manifest, out, map, pred, phones;
  auto* census = app.add_subcommand("census", "count phone validity categories");
  census->add_option("manifest", manifest)->required();
  census->add_option("--out", out, "directory for both CSVs (default: stdout)");

  auto* normalize = app.add_subcommand("normalize", "apply a replacement map");
  normalize->add_option("manifest", manifest)->required();
  normalize->add_option("--map", map)->required();
  normalize->add_option("--out", out)->required();

  auto* benchmark = app.add_subcommand("benchmark", "score model transcripts");
  benchmark->add_option("manifest", manifest)->required();
  benchmark->add_option("--pred", pred)->required();
  benchmark->add_option("--out", out)->required();
  benchmark->add_option("--phones", phones,
                        "comma-separated phones for recall/EPR (default: all)");

  TestConfig power_config;
  int n_min = 5, n_max = 95, n_step = 5;
  auto* power = app.add_subcommand("power", "sample size table");
  power->add_option("--alpha", power_config.alpha)->capture_default_str();
  power->add_option("--theta-null", power_config.theta_null)
      ->capture_default_str();
  power->add_option("--theta-alt", power_config.theta_alt)
      ->capture_default_str();
  power->add_option("--n-min", n_min)->capture_default_str();
  power->add_option("--n-max", n_max)->capture_default_str();
  power->add_option("--n-step", n_step)->capture_default_str();

  AuditArgs audit_args;
  auto* audit = app.add_subcommand("audit", "language-level audit");
  audit->require_subcommand(1);
  auto* score = audit->add_subcommand("score", "per-language median PFER");
  auto* select = audit->add_subcommand("select", "pick languages to audit");
  auto* sample = audit->add_subcommand("sample", "draw blind annotation tasks");
  auto* verdict = audit->add_subcommand("verdict", "preference test report");
  auto* filter = audit->add_subcommand("filter", "drop flagged languages");
  for (auto* sub : {score, select, sample}) {
    sub->add_option("manifest", audit_args.manifest)->required();
    sub->add_option("--pred", audit_args.pred)->required();
    sub->add_option("--min-coverage", audit_args.min_coverage)
        ->capture_default_str();
  }
  score->add_option("--out", audit_args.out);
  select->add_option("--quantile", audit_args.quantile)->capture_default_str();
  select->add_option("--out", audit_args.out);
  sample->add_option("--selection", audit_args.selection)->required();
  sample->add_option("--n", audit_args.n, "tasks per language");
  sample->add_option("--seed", audit_args.seed)->required();
  sample->add_option("--config", audit_args.config);
  sample->add_option("--out", audit_args.out)->required();
  verdict->add_option("--tasks", audit_args.tasks)->required();
  verdict->add_option("--keys", audit_args.keys)->required();
  verdict->add_option("--records", audit_args.records)->required();
  verdict->add_option("--config", audit_args.config);
  verdict->add_option("--manifest", audit_args.manifest);
  verdict->add_option("--pred", audit_args.pred);
  verdict->add_option("--out", audit_args.out);
  filter->add_option("manifest", audit_args.manifest)->required();
  filter->add_option("--report", audit_args.report)->required();
  filter->add_option("--out", audit_args.out);

  std::string records_a, records_b;
  auto* agreement = app.add_subcommand("agreement", "inter-annotator agreement");
  agreement->add_option("a", records_a)->required();
  agreement->add_option("b", records_b)->required();

  std::string state_dir, audio_root, host = "127.0.0.1";
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "annotation HTTP service");
  serve->add_option("manifest", manifest)->required();
  serve->add_option("--state", state_dir)->required();
  serve->add_option("--audio-root", audio_root);
  serve->add_option("--host", host)->capture_default_str();
  serve->add_option("--port", port, "0 picks a free port")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*census) return RunCensus(common, manifest, out);
    if (*normalize) return RunNormalize(common, manifest, map, out);
    if (*benchmark) return RunBenchmark(common, manifest, pred, out, phones);
    if (*power) return RunPower(power_config, n_min, n_max, n_step);
    if (*score) return RunAuditScore(common, audit_args);
    if (*select) return RunAuditSelect(common, audit_args);
    if (*sample) return RunAuditSample(common, audit_args);
    if (*verdict) return RunAuditVerdict(common, audit_args);
    if (*filter) return RunAuditFilter(audit_args);
    if (*agreement) return RunAgreement(records_a, records_b);
    if (*serve) return RunServe(manifest, state_dir, audio_root, host, port);
  } catch (const Error& e) {
    std::cerr << "phonaudit: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "phonaudit: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
