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

// Experiment protocols: zero-shot transfer, self-training grids, few-shot
// gold-fraction curves and the unlabeled-pool ablation. Every protocol is a
// pure function of its config; the seed list drives both the synthetic
// corpus and the training shuffle.

#ifndef SELFTAG_HARNESS_H_
#define SELFTAG_HARNESS_H_

#include <cstdint>
#include <filesystem>
#include <string>

#include "selftag/config.h"
#include "selftag/corpus.h"
#include "selftag/report.h"
#include "selftag/tagger.h"

namespace selftag {

// Absent splits are empty datasets.
struct ExperimentData {
  Dataset labeled;
  Dataset unlabeled;
  Dataset source_unlabeled;
  Dataset source_dev;
  Dataset source_test;
  Dataset target_dev;
  Dataset target_test;
  Dataset target_gold;
};

// Synthetic data is generated with seed synthetic.seed + seed; file data is
// read from disk and does not depend on the seed.
ExperimentData LoadExperimentData(const ExperimentConfig& config, uint64_t seed);

// Reads a CoNLL file. Throws kIo when it cannot be opened.
Dataset ReadConllFile(const std::filesystem::path& path, const TagScheme& scheme,
                      std::optional<Role> role = std::nullopt);
void WriteTextFile(const std::filesystem::path& path, const std::string& text);
std::string ReadTextFile(const std::filesystem::path& path);

// The model every protocol compares against: epochs_per_iteration epochs on
// the labeled data with target-dev model selection. It is identical to the
// first self-training phase.
TaggerModel TrainBaseline(const ExperimentConfig& config, const Dataset& labeled,
                          const Dataset& dev, uint64_t seed);

// Headline metric (macro span F1 or token accuracy); NaN for an empty set.
double HeadlineMetric(const TaggerModel& model, const Dataset& gold);

// Columns seed, split, metric, value. For each seed: one row per
// (split, metric) over the available source/target dev/test splits, then
// gap_dev and gap_test rows (source minus target, headline metric).
Report RunZeroShot(const ExperimentConfig& config);

// One row per (seed, grid policy): policy, source_test, target_dev,
// target_test, the zero-shot target numbers, iterations run, sentences
// promoted and the best iteration.
Report RunSelfTrainGrid(const ExperimentConfig& config);

struct FewShotReports {
  Report per_seed;  // seed, fraction, gold_added, finetune/selftrain dev/test
  Report curve;     // fraction and the seed means of the four metrics
};

// For each gold fraction f: L' = MixGoldFraction(L, target_gold, f), then
// plain training and self-training (few_shot_policy) on L'.
FewShotReports RunFewShot(const ExperimentConfig& config);

// Self-training with the target pool and with the equal-size source pool for
// every ablation tau. Rows: per pool, one row per tau and one "avg" row;
// columns pool, tau, target_dev_mean, target_test_mean and one target-dev
// column per seed. Throws kUnequalPoolSizes.
Report RunAblation(const ExperimentConfig& config);

// $SELFTAG_OUTPUT_ROOT/dir when the variable is set and dir is relative.
std::filesystem::path ResolveOutputDir(const std::string& dir);

// Writes <dir>/<name>.tsv and <dir>/<name>.json.
void WriteReport(const Report& report, const std::filesystem::path& dir);

}  // namespace selftag

#endif  // SELFTAG_HARNESS_H_
