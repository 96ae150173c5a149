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

#ifndef SELFTAG_CONFIG_H_
#define SELFTAG_CONFIG_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "selftag/selection.h"
#include "selftag/selftrain.h"
#include "selftag/synthetic.h"

namespace selftag {

// "key = value" lines; '#' starts a comment line; blank lines ignored.
// Keys may repeat only if later values should win (they do).
class KeyValueConfig {
 public:
  static KeyValueConfig Parse(std::string_view text);  // throws kInvalidConfig

  bool Has(std::string_view key) const;
  std::string GetString(std::string_view key, std::string fallback) const;
  int64_t GetInt(std::string_view key, int64_t fallback) const;
  double GetDouble(std::string_view key, double fallback) const;
  bool GetBool(std::string_view key, bool fallback) const;
  // Comma-separated values.
  std::vector<std::string> GetList(std::string_view key,
                                   std::vector<std::string> fallback) const;

  void Set(std::string key, std::string value) { values_[std::move(key)] = std::move(value); }
  // Every key never read through a getter; used to reject typos.
  std::vector<std::string> UnreadKeys() const;

 private:
  std::map<std::string, std::string, std::less<>> values_;
  mutable std::set<std::string, std::less<>> read_;
};

constexpr int kConfigVersion = 1;

struct DataFiles {
  std::string train;              // source labeled (L)
  std::string unlabeled;          // target pool (U)
  std::string source_unlabeled;   // ablation pool, same size as U
  std::string source_dev;
  std::string source_test;
  std::string target_dev;
  std::string target_test;
  std::string target_gold;        // few-shot gold pool
};

struct ExperimentConfig {
  SchemeKind task = SchemeKind::kBioEntity;  // "ner" or "pos"
  bool synthetic_data = true;                // "synthetic" or "files"
  SyntheticShiftSpec synthetic;
  DataFiles files;
  std::vector<SelectionPolicy> grid;
  SelectionPolicy selection = SelectionPolicy::Threshold(0.90);
  SelectionPolicy few_shot_policy = SelectionPolicy::FixedSize(100);
  std::vector<double> gold_fractions;
  std::vector<double> ablation_taus;
  std::vector<uint64_t> seeds;
  SelfTrainConfig self_train;
  std::string output_dir = "runs";

  // Defaults: the six-point grid {0.80, 0.90, 0.95} x {50, 100, 200}, gold
  // fractions 0..1 in steps of 0.2, seeds 0..4, K = 5, patience 10.
  static ExperimentConfig Defaults();
  // Throws kInvalidConfig on unknown keys, bad values or a version mismatch.
  static ExperimentConfig FromKeyValue(const KeyValueConfig& kv);
  static ExperimentConfig FromText(std::string_view text);

  void Validate() const;
  // Canonical flat key/value rendering; FromText(ToText()) reproduces it.
  std::string ToText() const;
};

}  // namespace selftag

#endif  // SELFTAG_CONFIG_H_
