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


// Command-line front end. Every subcommand exits 0 on success and with the
// error category (1..5) on a selftag::Error.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "selftag/config.h"
#include "selftag/corpus.h"
#include "selftag/error.h"
#include "selftag/eval.h"
#include "selftag/features.h"
#include "selftag/harness.h"
#include "selftag/report.h"
#include "selftag/selection.h"
#include "selftag/selftrain.h"
#include "selftag/synthetic.h"
#include "selftag/tagger.h"

namespace selftag {
namespace {

struct TrainArgs {
  std::string task = "ner";
  std::string train;
  std::string dev;
  std::string model_out;
  std::string templates;
  TrainConfig config;
};

struct SelfTrainArgs {
  TrainArgs base;
  std::string unlabeled;
  std::string policy = "threshold:0.9";
  std::string history_out;
  int epochs_per_iteration = 5;
  int max_iterations = 10;
  int outer_patience = 10;
  bool reinit = false;
};

SchemeKind TaskKind(const std::string& task) {
  if (task == "ner") return SchemeKind::kBioEntity;
  if (task == "pos") return SchemeKind::kFlatPos;
  throw Error(ErrorCode::kInvalidConfig, "task must be ner or pos");
}

TagScheme SchemeFromFiles(const std::string& task,
                          const std::vector<std::string>& paths) {
  std::string text;
  for (const auto& p : paths) {
    if (p.empty()) continue;
    text += ReadTextFile(p);
    text += "\n";
  }
  return InferScheme(text, TaskKind(task));
}

Dataset OptionalDev(const std::string& path, const TagScheme& scheme) {
  if (path.empty()) return Dataset(scheme, {}, Role::kDev);
  return ReadConllFile(path, scheme, Role::kDev);
}

std::vector<FeatureTemplate> TemplatesOrDefault(const std::string& text) {
  return text.empty() ? DefaultTemplates() : ParseTemplates(text);
}

void AddTrainOptions(CLI::App* cmd, TrainArgs& a) {
  cmd->add_option("--task", a.task, "ner or pos")->capture_default_str();
  cmd->add_option("--train", a.train, "labeled CoNLL file")->required();
  cmd->add_option("--dev", a.dev, "dev CoNLL file for model selection");
  cmd->add_option("--model", a.model_out, "output model path")->required();
  cmd->add_option("--templates", a.templates, "comma-separated feature templates");
  cmd->add_option("--epochs", a.config.epochs)->capture_default_str();
  cmd->add_option("--learning-rate", a.config.learning_rate)->capture_default_str();
  cmd->add_option("--l2", a.config.l2)->capture_default_str();
  cmd->add_option("--batch-size", a.config.batch_size)->capture_default_str();
  cmd->add_option("--seed", a.config.seed)->capture_default_str();
  cmd->add_option("--patience", a.config.patience)->capture_default_str();
}

void RunTrain(const TrainArgs& a) {
  TagScheme scheme = SchemeFromFiles(a.task, {a.train, a.dev});
  Dataset train = ReadConllFile(a.train, scheme, Role::kLabeled);
  Dataset dev = OptionalDev(a.dev, scheme);
  TrainResult r = Train(train, dev, a.config, TemplatesOrDefault(a.templates));
  for (const auto& e : r.history) {
    std::cerr << "epoch " << e.epoch << "\tobjective " << e.objective
              << "\tdev " << FormatShortest(e.dev_metric)
              << (e.improved ? "\t*" : "") << "\n";
  }
  WriteTextFile(a.model_out, r.model.Serialize());
}

void RunPredict(const std::string& model_path, const std::string& input,
                const std::string& output) {
  TaggerModel model = TaggerModel::Deserialize(ReadTextFile(model_path));
  // Input may be labeled or not; only tokens are used.
  Dataset ds = ParseConll(ReadTextFile(input), model.scheme(), std::nullopt,
                          BioMode::kRepair);
  std::string out;
  for (size_t i = 0; i < ds.size(); ++i) {
    Prediction p = PredictWithConfidence(model, ds[i].tokens);
    if (i > 0) out += "\n";
    out += "# min_confidence=" + FormatShortest(p.min_confidence) + "\n";
    std::vector<std::string> labels = model.scheme().kind() == SchemeKind::kBioEntity
                                          ? RepairBio(p.labels)
                                          : p.labels;
    for (size_t j = 0; j < labels.size(); ++j) {
      out += ds[i].tokens[j] + "\t" + labels[j] + "\n";
    }
  }
  if (output.empty()) {
    std::cout << out;
  } else {
    WriteTextFile(output, out);
  }
}

void RunEval(const std::string& task, const std::string& gold_path,
             const std::string& pred_path, bool json) {
  TagScheme scheme = SchemeFromFiles(task, {gold_path, pred_path});
  Dataset gold = ReadConllFile(gold_path, scheme, Role::kTest);
  Dataset pred = ParseConll(ReadTextFile(pred_path), scheme, Role::kTest,
                            BioMode::kRepair);
  LabelSequences p = GoldLabels(pred);
  if (scheme.kind() == SchemeKind::kBioEntity) {
    EvalReport r = SpanF1(gold, p);
    if (json) {
      std::cout << r.ToJson().dump(2) << "\n";
    } else {
      std::cout << r.ToTable();
    }
  } else {
    const double acc = TokenAccuracy(GoldLabels(gold), p);
    if (json) {
      nlohmann::ordered_json j;
      j["token_accuracy"] = acc;
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << "token_accuracy\t" << FormatShortest(acc) << "\n";
    }
  }
}

void RunSelfTrainCommand(const SelfTrainArgs& a) {
  TagScheme scheme = SchemeFromFiles(a.base.task, {a.base.train, a.base.dev});
  Dataset train = ReadConllFile(a.base.train, scheme, Role::kLabeled);
  Dataset unlabeled = ParseConll(ReadTextFile(a.unlabeled), scheme, std::nullopt,
                                 BioMode::kRepair)
                          .StripLabels();
  Dataset dev = OptionalDev(a.base.dev, scheme);
  SelfTrainConfig st;
  st.tagger = a.base.config;
  st.seed = a.base.config.seed;
  st.templates = TemplatesOrDefault(a.base.templates);
  st.policy = SelectionPolicy::Parse(a.policy);
  st.epochs_per_iteration = a.epochs_per_iteration;
  st.max_iterations = a.max_iterations;
  st.patience = a.outer_patience;
  st.reinit_each_iteration = a.reinit;
  SelfTrainResult r = SelfTrain(train, unlabeled, dev, st);
  const std::string tsv = HistoryTsv(r.history);
  if (a.history_out.empty()) {
    std::cout << tsv;
  } else {
    WriteTextFile(a.history_out, tsv);
  }
  std::cerr << "stop: " << StopReasonName(r.stop_reason) << ", best iteration "
            << r.best_iteration << "\n";
  WriteTextFile(a.base.model_out, r.model.Serialize());
}

ExperimentConfig LoadConfig(const std::string& path) {
  if (path.empty()) return ExperimentConfig::Defaults();
  return ExperimentConfig::FromText(ReadTextFile(path));
}

void EmitReport(const Report& report, const ExperimentConfig& config) {
  const auto dir = ResolveOutputDir(config.output_dir);
  WriteReport(report, dir);
  std::cout << report.ToTsv();
  std::cerr << "wrote " << (dir / (report.name() + ".tsv")).string() << "\n";
}

void RunSynth(const ExperimentConfig& config, uint64_t seed, const std::string& out) {
  ExperimentData d = LoadExperimentData(config, seed);
  const std::filesystem::path dir = ResolveOutputDir(out);
  const std::pair<const char*, const Dataset*> files[] = {
      {"labeled", &d.labeled},         {"unlabeled", &d.unlabeled},
      {"source_unlabeled", &d.source_unlabeled},
      {"source_dev", &d.source_dev},   {"source_test", &d.source_test},
      {"target_dev", &d.target_dev},   {"target_test", &d.target_test},
      {"target_gold", &d.target_gold}};
  for (const auto& [name, ds] : files) {
    WriteTextFile(dir / (std::string(name) + ".conll"), WriteConll(*ds));
  }
  std::cerr << "wrote synthetic corpus to " << dir.string() << "\n";
}

std::vector<double> ReadProbabilities(const std::string& path) {
  std::vector<double> out;
  std::istringstream in(ReadTextFile(path));
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
    if (ec != std::errc() || ptr != line.data() + line.size()) {
      throw Error(ErrorCode::kMalformedLine,
                  path + ":" + std::to_string(lineno) + ": expected a probability");
    }
    out.push_back(v);
  }
  return out;
}

void RunDialectSplit(const std::string& task, const std::string& input,
                     const std::string& probs, double threshold, uint64_t seed,
                     const std::string& out) {
  TagScheme scheme = SchemeFromFiles(task, {input});
  Dataset ds = ReadConllFile(input, scheme, Role::kTest);
  std::vector<double> p = ReadProbabilities(probs);
  auto [dev, test] = FilterAndSplitByProbability(ds, p, threshold, seed);
  const std::filesystem::path dir = ResolveOutputDir(out);
  WriteTextFile(dir / "dev.conll", WriteConll(dev));
  WriteTextFile(dir / "test.conll", WriteConll(test));
  std::cerr << "kept " << dev.size() + test.size() << " of " << ds.size()
            << " sentences: " << dev.size() << " dev, " << test.size() << " test\n";
}

int Main(int argc, char** argv) {
  CLI::App app{"selftag: self-training sequence taggers under domain shift"};
  app.require_subcommand(1);

  TrainArgs train_args;
  AddTrainOptions(app.add_subcommand("train", "train a tagger"), train_args);

  std::string model_path, input_path, output_path;
  auto* predict = app.add_subcommand("predict", "tag a CoNLL file");
  predict->add_option("--model", model_path)->required();
  predict->add_option("--input", input_path)->required();
  predict->add_option("--output", output_path, "default: stdout");

  std::string eval_task = "ner", gold_path, pred_path;
  bool eval_json = false;
  auto* eval = app.add_subcommand("eval", "score predictions against gold");
  eval->add_option("--task", eval_task)->capture_default_str();
  eval->add_option("--gold", gold_path)->required();
  eval->add_option("--pred", pred_path)->required();
  eval->add_flag("--json", eval_json);

  SelfTrainArgs st_args;
  auto* selftrain = app.add_subcommand("selftrain", "self-train on an unlabeled pool");
  AddTrainOptions(selftrain, st_args.base);
  selftrain->add_option("--unlabeled", st_args.unlabeled)->required();
  selftrain->add_option("--policy", st_args.policy, "threshold:<tau> or fixed:<s>")
      ->capture_default_str();
  selftrain->add_option("--history", st_args.history_out, "TSV log, default: stdout");
  selftrain->add_option("--epochs-per-iteration", st_args.epochs_per_iteration)
      ->capture_default_str();
  selftrain->add_option("--max-iterations", st_args.max_iterations)
      ->capture_default_str();
  selftrain->add_option("--outer-patience", st_args.outer_patience)
      ->capture_default_str();
  selftrain->add_flag("--reinit", st_args.reinit);

  std::string config_path;
  auto add_protocol = [&](const char* name, const char* help) {
    auto* cmd = app.add_subcommand(name, help);
    cmd->add_option("--config", config_path, "experiment config file");
    return cmd;
  };
  auto* zeroshot = add_protocol("zeroshot", "zero-shot transfer report");
  auto* grid = add_protocol("grid", "self-training grid report");
  auto* fewshot = add_protocol("fewshot", "few-shot gold-fraction curves");
  auto* ablate = add_protocol("ablate", "target vs source unlabeled pool");

  uint64_t synth_seed = 0;
  std::string synth_out = "synthetic";
  auto* synth = add_protocol("synth", "write a synthetic corpus as CoNLL");
  synth->add_option("--seed", synth_seed)->capture_default_str();
  synth->add_option("--out", synth_out)->capture_default_str();

  std::string split_task = "ner", split_input, split_probs, split_out = "split";
  double split_threshold = 0.90;
  uint64_t split_seed = 0;
  auto* split = app.add_subcommand("dialect-split",
                                   "filter by classifier probability, split 30/70");
  split->add_option("--task", split_task)->capture_default_str();
  split->add_option("--input", split_input)->required();
  split->add_option("--probs", split_probs, "one probability per sentence")->required();
  split->add_option("--threshold", split_threshold)->capture_default_str();
  split->add_option("--seed", split_seed)->capture_default_str();
  split->add_option("--out", split_out)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(predict)) {
      RunPredict(model_path, input_path, output_path);
    } else if (app.got_subcommand(eval)) {
      RunEval(eval_task, gold_path, pred_path, eval_json);
    } else if (app.got_subcommand(selftrain)) {
      RunSelfTrainCommand(st_args);
    } else if (app.got_subcommand(zeroshot)) {
      auto c = LoadConfig(config_path);
      EmitReport(RunZeroShot(c), c);
    } else if (app.got_subcommand(grid)) {
      auto c = LoadConfig(config_path);
      EmitReport(RunSelfTrainGrid(c), c);
    } else if (app.got_subcommand(fewshot)) {
      auto c = LoadConfig(config_path);
      FewShotReports r = RunFewShot(c);
      WriteReport(r.per_seed, ResolveOutputDir(c.output_dir));
      EmitReport(r.curve, c);
    } else if (app.got_subcommand(ablate)) {
      auto c = LoadConfig(config_path);
      EmitReport(RunAblation(c), c);
    } else if (app.got_subcommand(synth)) {
      RunSynth(LoadConfig(config_path), synth_seed, synth_out);
    } else if (app.got_subcommand(split)) {
      RunDialectSplit(split_task, split_input, split_probs, split_threshold,
                      split_seed, split_out);
    } else {
      RunTrain(train_args);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.category();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  }
  return 0;
}

}  // namespace
}  // namespace selftag

int main(int argc, char** argv) { return selftag::Main(argc, argv); }
