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

// Confidence-based self-training: train on L, tag every sentence left in U,
// move the confidently tagged ones into L with their predicted labels, and
// repeat.

#ifndef SELFTAG_SELFTRAIN_H_
#define SELFTAG_SELFTRAIN_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "selftag/corpus.h"
#include "selftag/features.h"
#include "selftag/selection.h"
#include "selftag/tagger.h"

namespace selftag {

struct SelfTrainConfig {
  int epochs_per_iteration = 5;
  SelectionPolicy policy = SelectionPolicy::Threshold(0.90);
  // Outer-loop patience, counted in iterations.
  int patience = 10;
  int max_iterations = 10;
  uint64_t seed = 0;
  // learning_rate, l2, batch_size and (inner, per-epoch) patience are used;
  // epochs and seed are overridden by epochs_per_iteration and seed.
  TrainConfig tagger;
  std::vector<FeatureTemplate> templates = DefaultTemplates();
  // Start every iteration from a fresh model instead of the current weights.
  bool reinit_each_iteration = false;

  void Validate() const;  // throws kInvalidConfig
  // The config a single training phase runs with.
  TrainConfig PhaseConfig() const;
};

struct IterationRecord {
  int iteration = 0;
  size_t labeled_size = 0;    // |L| the model was trained on
  size_t unlabeled_size = 0;  // |U| before this iteration's promotion
  size_t promoted = 0;
  double dev_metric = 0.0;
  std::optional<double> min_confidence;   // over promoted examples
  std::optional<double> mean_confidence;  // over promoted examples
  int inner_epochs = 0;
};

enum class StopReason {
  kUnlabeledExhausted,
  kNoPromotions,
  kMaxIterations,
  kPatience,
};

std::string_view StopReasonName(StopReason reason);

struct SelfTrainResult {
  TaggerModel model;  // best dev metric seen (latest model without a dev set)
  std::vector<IterationRecord> history;
  int best_iteration = 0;
  double best_dev_metric = 0.0;
  StopReason stop_reason = StopReason::kMaxIterations;
  Dataset final_labeled;    // gold followed by promoted sentences
  Dataset final_unlabeled;  // what was never promoted, in original order
};

// Each iteration trains for epochs_per_iteration epochs on the current L,
// records the dev metric, and then (unless a stop condition holds) tags the
// remaining U and promotes the selected sentences with provenance
// pseudo(iteration, min_confidence). Predicted BIO labels are promoted after
// RepairBio. Stops when U is empty, nothing was promoted, max_iterations
// promotion rounds have run (a final phase then trains on the last L), or
// the dev metric has not improved for `patience` iterations.
// Throws kSchemeMismatch, kEmptyLabeledSet.
SelfTrainResult SelfTrain(const Dataset& labeled, const Dataset& unlabeled,
                          const Dataset& dev, const SelfTrainConfig& config);

// Columns: iter, L_size, U_size, promoted, dev_metric, min_conf, mean_conf.
std::string HistoryTsv(const std::vector<IterationRecord>& history);

}  // namespace selftag

#endif  // SELFTAG_SELFTRAIN_H_
