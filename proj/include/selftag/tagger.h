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

// First-order linear-chain conditional tagger trained by L2-regularized
// conditional maximum likelihood. Per-token posterior marginals serve as the
// confidence scores consumed by self-training.

#ifndef SELFTAG_TAGGER_H_
#define SELFTAG_TAGGER_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "selftag/corpus.h"
#include "selftag/features.h"
#include "selftag/lattice.h"

namespace selftag {

struct TrainConfig {
  int epochs = 5;
  double learning_rate = 0.1;
  double l2 = 1e-4;
  int batch_size = 8;
  uint64_t seed = 0;
  int patience = 10;

  void Validate() const;  // throws kInvalidConfig
  bool operator==(const TrainConfig& other) const = default;
};

// Weights are laid out as one |V|-block per dictionary feature followed by
// the |V| x |V| transition block; a flat parameter index p addresses
// observation weight (p / |V|, p % |V|) for p < F|V| and transition
// (q / |V|, q % |V|) for q = p - F|V| otherwise.
class TaggerModel {
 public:
  TaggerModel(TagScheme scheme, std::vector<FeatureTemplate> templates);

  const TagScheme& scheme() const { return scheme_; }
  const std::vector<FeatureTemplate>& templates() const { return templates_; }
  int num_labels() const { return scheme_.size(); }
  bool uses_transitions() const { return uses_transitions_; }

  size_t num_features() const { return feature_names_.size(); }
  const std::string& feature_name(size_t f) const { return feature_names_[f]; }
  // -1 when absent from the dictionary.
  int FeatureIndex(std::string_view name) const;
  // Existing index, or a new zero-weighted entry.
  int AddFeature(std::string_view name);

  double weight(size_t feature, int label) const {
    return weights_[feature * num_labels() + label];
  }
  double& weight(size_t feature, int label) {
    return weights_[feature * num_labels() + label];
  }
  double transition(int from, int to) const {
    return transitions_[from * num_labels() + to];
  }
  double& transition(int from, int to) {
    return transitions_[from * num_labels() + to];
  }

  size_t num_parameters() const {
    return weights_.size() + transitions_.size();
  }
  double parameter(size_t p) const {
    return p < weights_.size() ? weights_[p] : transitions_[p - weights_.size()];
  }
  double& parameter(size_t p) {
    return p < weights_.size() ? weights_[p] : transitions_[p - weights_.size()];
  }
  std::vector<double> Parameters() const;
  bool AllFinite() const;

  const TrainConfig& train_config() const { return train_config_; }
  void set_train_config(const TrainConfig& config) { train_config_ = config; }

  // Versioned text format, lossless (shortest round-trip decimal reals).
  void Save(std::ostream& out) const;
  std::string Serialize() const;
  static TaggerModel Load(std::istream& in);
  static TaggerModel Deserialize(std::string_view text);

  bool operator==(const TaggerModel& other) const;

 private:
  TagScheme scheme_;
  std::vector<FeatureTemplate> templates_;
  bool uses_transitions_;
  std::vector<std::string> feature_names_;
  std::unordered_map<std::string, int> feature_index_;
  std::vector<double> weights_;
  std::vector<double> transitions_;
  TrainConfig train_config_;
};

// A sentence with features resolved to dictionary indices. Features absent
// from the dictionary are dropped.
struct EncodedSentence {
  std::vector<std::vector<int>> features;  // per position
  std::vector<int> gold;                   // empty when unlabeled

  int length() const { return static_cast<int>(features.size()); }
};

EncodedSentence Encode(const TaggerModel& model, const LabeledSentence& sentence);
// Adds every observation feature of `ds` to the dictionary.
void GrowDictionary(TaggerModel& model, const Dataset& ds);

Lattice ScoreLattice(const TaggerModel& model, const EncodedSentence& sentence);
Lattice ScoreLattice(const TaggerModel& model, std::span<const std::string> tokens);

struct ObjectiveAndGradient {
  double objective = 0.0;
  std::vector<double> gradient;  // indexed like TaggerModel::parameter
};

// sum over the batch of (gold path score - log Z) - (l2 / 2) ||w||^2 and its
// gradient (observed - expected feature counts - l2 w).
// Throws kUnlabeledSentenceInBatch, kEmptyTrainingSet for an empty batch.
ObjectiveAndGradient LogLikelihoodAndGradient(
    const TaggerModel& model, std::span<const EncodedSentence> batch, double l2);
ObjectiveAndGradient LogLikelihoodAndGradient(
    const TaggerModel& model, std::span<const LabeledSentence> batch, double l2);

struct EpochRecord {
  int epoch = 0;
  double objective = 0.0;   // full regularized objective on the training set
  double dev_metric = 0.0;  // NaN when no dev set
  bool improved = false;
};

struct TrainResult {
  TaggerModel model;
  std::vector<EpochRecord> history;
  int best_epoch = 0;  // 0 when no epoch ran or no dev set
};

// Mini-batch gradient ascent with per-parameter AdaGrad step sizes. The
// dictionary is grown from `train` before the first epoch, then frozen.
// Keeps the best-dev weights and stops after `patience` epochs without dev
// improvement. Deterministic given config.seed.
// Throws kEmptyTrainingSet.
TrainResult Train(TaggerModel initial, const Dataset& train, const Dataset& dev,
                  const TrainConfig& config);
TrainResult Train(const Dataset& train, const Dataset& dev,
                  const TrainConfig& config,
                  std::vector<FeatureTemplate> templates = DefaultTemplates());

struct Prediction {
  std::vector<int> label_ids;
  std::vector<std::string> labels;
  std::vector<double> confidences;  // posterior marginal of the chosen label
  double min_confidence = 0.0;

  size_t size() const { return labels.size(); }
};

Prediction PredictWithConfidence(const TaggerModel& model,
                                 std::span<const std::string> tokens);
std::vector<Prediction> PredictAll(const TaggerModel& model, const Dataset& ds);
std::vector<std::vector<std::string>> PredictLabels(const TaggerModel& model,
                                                    const Dataset& ds);

// TaskMetric of the model's Viterbi output on a labeled dataset.
double EvaluateTaskMetric(const TaggerModel& model, const Dataset& gold);

}  // namespace selftag

#endif  // SELFTAG_TAGGER_H_
