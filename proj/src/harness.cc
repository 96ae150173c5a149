// Copyright 2026 The selftag Authors. All Rights Reserved.
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

#include "selftag/harness.h"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "selftag/error.h"
#include "selftag/eval.h"
#include "selftag/selftrain.h"
#include "selftag/synthetic.h"

namespace selftag {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

TagScheme SchemeForFiles(const ExperimentConfig& config) {
  const std::string train = ReadTextFile(config.files.train);
  return InferScheme(train, config.task);
}

Dataset OptionalFile(const std::string& path, const TagScheme& scheme, Role role) {
  if (path.empty()) return Dataset(scheme, {}, role);
  Dataset ds = ReadConllFile(path, scheme);
  return role == Role::kUnlabeled ? ds.StripLabels() : ds.WithRole(role);
}

SelfTrainConfig SelfTrainFor(const ExperimentConfig& config,
                             const SelectionPolicy& policy, uint64_t seed) {
  SelfTrainConfig st = config.self_train;
  st.policy = policy;
  st.seed = seed;
  return st;
}

std::vector<std::pair<std::string, double>> SplitMetrics(const TaggerModel& model,
                                                         const Dataset& gold) {
  LabelSequences pred = PredictLabels(model, gold);
  LabelSequences ref = GoldLabels(gold);
  if (gold.scheme().kind() == SchemeKind::kBioEntity) {
    EvalReport r = SpanF1(gold.scheme(), ref, pred);
    return {{"macro_f1", r.macro_f1},
            {"micro_f1", r.micro_f1},
            {"token_accuracy", r.token_accuracy}};
  }
  return {{"token_accuracy", TokenAccuracy(ref, pred)}};
}

std::string HeadlineName(SchemeKind kind) {
  return kind == SchemeKind::kBioEntity ? "macro_f1" : "token_accuracy";
}

std::string FormatTau(double tau) { return FormatShortest(tau); }

double Mean(const std::vector<double>& xs) {
  if (xs.empty()) return kNaN;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

}  // namespace

Dataset ReadConllFile(const std::filesystem::path& path, const TagScheme& scheme,
                      std::optional<Role> role) {
  return ParseConll(ReadTextFile(path), scheme, role);
}

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteTextFile(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "write failed for '" + path.string() + "'");
}

ExperimentData LoadExperimentData(const ExperimentConfig& config, uint64_t seed) {
  if (config.synthetic_data) {
    SyntheticShiftSpec spec = config.synthetic;
    spec.scheme = config.task;
    spec.seed = config.synthetic.seed + seed;
    SyntheticCorpus c = GenerateSyntheticShift(spec);
    return ExperimentData{c.labeled,     c.unlabeled,   c.source_unlabeled,
                          c.source_dev,  c.source_test, c.target_dev,
                          c.target_test, c.target_gold};
  }
  const TagScheme scheme = SchemeForFiles(config);
  const auto& f = config.files;
  return ExperimentData{
      ReadConllFile(f.train, scheme, Role::kLabeled),
      OptionalFile(f.unlabeled, scheme, Role::kUnlabeled),
      OptionalFile(f.source_unlabeled, scheme, Role::kUnlabeled),
      OptionalFile(f.source_dev, scheme, Role::kDev),
      OptionalFile(f.source_test, scheme, Role::kTest),
      OptionalFile(f.target_dev, scheme, Role::kDev),
      OptionalFile(f.target_test, scheme, Role::kTest),
      OptionalFile(f.target_gold, scheme, Role::kLabeled),
  };
}

TaggerModel TrainBaseline(const ExperimentConfig& config, const Dataset& labeled,
                          const Dataset& dev, uint64_t seed) {
  SelfTrainConfig st = SelfTrainFor(config, config.selection, seed);
  return Train(TaggerModel(labeled.scheme(), st.templates), labeled, dev,
               st.PhaseConfig())
      .model;
}

double HeadlineMetric(const TaggerModel& model, const Dataset& gold) {
  if (gold.empty()) return kNaN;
  return EvaluateTaskMetric(model, gold);
}

Report RunZeroShot(const ExperimentConfig& config) {
  config.Validate();
  Report report("zeroshot", {{"seed", ColumnType::kInt},
                             {"split", ColumnType::kText},
                             {"metric", ColumnType::kText},
                             {"value", ColumnType::kReal}});
  for (uint64_t seed : config.seeds) {
    ExperimentData data = LoadExperimentData(config, seed);
    TaggerModel model = TrainBaseline(config, data.labeled, data.target_dev, seed);
    const std::pair<const char*, const Dataset*> splits[] = {
        {"source_dev", &data.source_dev},
        {"source_test", &data.source_test},
        {"target_dev", &data.target_dev},
        {"target_test", &data.target_test}};
    for (const auto& [name, ds] : splits) {
      if (ds->empty()) continue;
      for (const auto& [metric, value] : SplitMetrics(model, *ds)) {
        report.AddRow({static_cast<int64_t>(seed), std::string(name), metric, value});
      }
    }
    const std::string headline = HeadlineName(config.task);
    auto gap = [&](const Dataset& src, const Dataset& tgt, const char* name) {
      if (src.empty() || tgt.empty()) return;
      report.AddRow({static_cast<int64_t>(seed), std::string(name), headline,
                     HeadlineMetric(model, src) - HeadlineMetric(model, tgt)});
    };
    gap(data.source_dev, data.target_dev, "gap_dev");
    gap(data.source_test, data.target_test, "gap_test");
  }
  report.Validate();
  return report;
}

Report RunSelfTrainGrid(const ExperimentConfig& config) {
  config.Validate();
  Report report("grid", {{"seed", ColumnType::kInt},
                         {"policy", ColumnType::kText},
                         {"source_test", ColumnType::kReal},
                         {"target_dev", ColumnType::kReal},
                         {"target_test", ColumnType::kReal},
                         {"zero_shot_target_dev", ColumnType::kReal},
                         {"zero_shot_target_test", ColumnType::kReal},
                         {"iterations", ColumnType::kInt},
                         {"promoted", ColumnType::kInt},
                         {"best_iteration", ColumnType::kInt}});
  for (uint64_t seed : config.seeds) {
    ExperimentData data = LoadExperimentData(config, seed);
    TaggerModel baseline = TrainBaseline(config, data.labeled, data.target_dev, seed);
    const double zs_dev = HeadlineMetric(baseline, data.target_dev);
    const double zs_test = HeadlineMetric(baseline, data.target_test);
    for (const auto& policy : config.grid) {
      SelfTrainResult r = SelfTrain(data.labeled, data.unlabeled, data.target_dev,
                                    SelfTrainFor(config, policy, seed));
      int64_t promoted = 0;
      for (const auto& rec : r.history) promoted += static_cast<int64_t>(rec.promoted);
      report.AddRow({static_cast<int64_t>(seed), policy.ToString(),
                     HeadlineMetric(r.model, data.source_test),
                     HeadlineMetric(r.model, data.target_dev),
                     HeadlineMetric(r.model, data.target_test), zs_dev, zs_test,
                     static_cast<int64_t>(r.history.size()), promoted,
                     static_cast<int64_t>(r.best_iteration)});
    }
  }
  report.Validate();
  return report;
}

FewShotReports RunFewShot(const ExperimentConfig& config) {
  config.Validate();
  FewShotReports out{
      Report("fewshot", {{"seed", ColumnType::kInt},
                         {"fraction", ColumnType::kReal},
                         {"gold_added", ColumnType::kInt},
                         {"finetune_dev", ColumnType::kReal},
                         {"selftrain_dev", ColumnType::kReal},
                         {"finetune_test", ColumnType::kReal},
                         {"selftrain_test", ColumnType::kReal}}),
      Report("fewshot_curve", {{"fraction", ColumnType::kReal},
                               {"finetune_dev", ColumnType::kReal},
                               {"selftrain_dev", ColumnType::kReal},
                               {"finetune_test", ColumnType::kReal},
                               {"selftrain_test", ColumnType::kReal}})};
  const size_t nf = config.gold_fractions.size();
  std::vector<std::array<std::vector<double>, 4>> sums(nf);
  for (uint64_t seed : config.seeds) {
    ExperimentData data = LoadExperimentData(config, seed);
    if (data.target_gold.empty()) {
      throw Error(ErrorCode::kInvalidConfig, "few-shot needs target gold data");
    }
    for (size_t i = 0; i < nf; ++i) {
      const double fraction = config.gold_fractions[i];
      Dataset mixed = MixGoldFraction(data.labeled, data.target_gold, fraction, seed);
      const auto added = static_cast<int64_t>(mixed.size() - data.labeled.size());
      TaggerModel finetuned = TrainBaseline(config, mixed, data.target_dev, seed);
      SelfTrainResult st = SelfTrain(mixed, data.unlabeled, data.target_dev,
                                     SelfTrainFor(config, config.few_shot_policy, seed));
      const double values[4] = {HeadlineMetric(finetuned, data.target_dev),
                                HeadlineMetric(st.model, data.target_dev),
                                HeadlineMetric(finetuned, data.target_test),
                                HeadlineMetric(st.model, data.target_test)};
      out.per_seed.AddRow({static_cast<int64_t>(seed), fraction, added, values[0],
                           values[1], values[2], values[3]});
      for (int k = 0; k < 4; ++k) sums[i][k].push_back(values[k]);
    }
  }
  for (size_t i = 0; i < nf; ++i) {
    out.curve.AddRow({config.gold_fractions[i], Mean(sums[i][0]), Mean(sums[i][1]),
                      Mean(sums[i][2]), Mean(sums[i][3])});
  }
  out.per_seed.Validate();
  out.curve.Validate();
  return out;
}

Report RunAblation(const ExperimentConfig& config) {
  config.Validate();
  std::vector<Column> columns = {{"pool", ColumnType::kText},
                                 {"tau", ColumnType::kText},
                                 {"target_dev_mean", ColumnType::kReal},
                                 {"target_test_mean", ColumnType::kReal}};
  for (uint64_t seed : config.seeds) {
    columns.push_back({"seed_" + std::to_string(seed), ColumnType::kReal});
  }
  Report report("ablation", std::move(columns));

  const size_t nt = config.ablation_taus.size();
  const size_t ns = config.seeds.size();
  // [pool][tau][seed]
  std::vector<double> dev(2 * nt * ns), test(2 * nt * ns);
  for (size_t si = 0; si < ns; ++si) {
    const uint64_t seed = config.seeds[si];
    ExperimentData data = LoadExperimentData(config, seed);
    if (data.unlabeled.size() != data.source_unlabeled.size()) {
      throw Error(ErrorCode::kUnequalPoolSizes,
                  "target pool has " + std::to_string(data.unlabeled.size()) +
                      " sentences, source pool " +
                      std::to_string(data.source_unlabeled.size()));
    }
    const Dataset* pools[2] = {&data.unlabeled, &data.source_unlabeled};
    for (size_t p = 0; p < 2; ++p) {
      for (size_t ti = 0; ti < nt; ++ti) {
        SelfTrainResult r = SelfTrain(
            data.labeled, *pools[p], data.target_dev,
            SelfTrainFor(config, SelectionPolicy::Threshold(config.ablation_taus[ti]),
                         seed));
        const size_t k = (p * nt + ti) * ns + si;
        dev[k] = HeadlineMetric(r.model, data.target_dev);
        test[k] = HeadlineMetric(r.model, data.target_test);
      }
    }
  }
  const char* pool_names[2] = {"target", "source"};
  for (size_t p = 0; p < 2; ++p) {
    std::vector<double> all_dev, all_test;
    std::vector<std::vector<double>> per_seed(ns);
    for (size_t ti = 0; ti < nt; ++ti) {
      std::vector<Cell> row = {std::string(pool_names[p]),
                               FormatTau(config.ablation_taus[ti])};
      std::vector<double> d, t;
      for (size_t si = 0; si < ns; ++si) {
        const size_t k = (p * nt + ti) * ns + si;
        d.push_back(dev[k]);
        t.push_back(test[k]);
        per_seed[si].push_back(dev[k]);
      }
      row.push_back(Mean(d));
      row.push_back(Mean(t));
      for (double x : d) row.push_back(x);
      all_dev.insert(all_dev.end(), d.begin(), d.end());
      all_test.insert(all_test.end(), t.begin(), t.end());
      report.AddRow(std::move(row));
    }
    std::vector<Cell> avg = {std::string(pool_names[p]), std::string("avg"),
                             Mean(all_dev), Mean(all_test)};
    for (size_t si = 0; si < ns; ++si) avg.push_back(Mean(per_seed[si]));
    report.AddRow(std::move(avg));
  }
  report.Validate();
  return report;
}

std::filesystem::path ResolveOutputDir(const std::string& dir) {
  std::filesystem::path path(dir);
  const char* root = std::getenv("SELFTAG_OUTPUT_ROOT");
  if (root != nullptr && *root != '\0' && path.is_relative()) {
    return std::filesystem::path(root) / path;
  }
  return path;
}

void WriteReport(const Report& report, const std::filesystem::path& dir) {
  WriteTextFile(dir / (report.name() + ".tsv"), report.ToTsv());
  WriteTextFile(dir / (report.name() + ".json"), report.ToJson().dump(2) + "\n");
}

}  // namespace selftag
