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

// Span-level P/R/F1 with exact (type, start, end) matching, token accuracy,
// token-level confusion matrices and the TP/FP/FN/TN error categories derived
// from them.

#ifndef SELFTAG_EVAL_H_
#define SELFTAG_EVAL_H_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "selftag/corpus.h"

namespace selftag {

using LabelSequences = std::vector<std::vector<std::string>>;

LabelSequences GoldLabels(const Dataset& gold);

struct TypeScores {
  std::string type;
  int64_t true_positives = 0;
  int64_t false_positives = 0;
  int64_t false_negatives = 0;
  int64_t support = 0;  // gold spans
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct EvalReport {
  std::vector<TypeScores> per_type;
  double macro_f1 = 0.0;
  double micro_precision = 0.0;
  double micro_recall = 0.0;
  double micro_f1 = 0.0;
  double token_accuracy = 0.0;
  int64_t tokens = 0;

  nlohmann::ordered_json ToJson() const;
  // Fixed-width table; values rounded to 4 decimals for display only.
  std::string ToTable() const;
};

struct SpanF1Options {
  // Count entity types without gold spans as F1 = 0 in the macro mean.
  bool include_zero_support = false;
};

// Predicted sequences may violate strict BIO; a stray I-X is read as the
// start of a new X span (the predictions are passed through RepairBio).
// Throws kLengthMismatch, kNotBioScheme.
EvalReport SpanF1(const Dataset& gold, const LabelSequences& predicted,
                  SpanF1Options options = {});
EvalReport SpanF1(const TagScheme& scheme, const LabelSequences& gold,
                  const LabelSequences& predicted, SpanF1Options options = {});

double TokenAccuracy(const LabelSequences& gold, const LabelSequences& predicted);

// The metric used for model selection: macro span F1 for BIO schemes and
// token accuracy for flat POS schemes.
double TaskMetric(const TagScheme& scheme, const LabelSequences& gold,
                  const LabelSequences& predicted);

// Rows are gold categories, columns predicted categories, unit is tokens.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::vector<std::string> categories);

  // Categories in the order used by the error-analysis tables.
  static ConfusionMatrix FromRows(std::vector<std::string> categories,
                                  const std::vector<std::vector<int64_t>>& rows);

  const std::vector<std::string>& categories() const { return categories_; }
  int size() const { return static_cast<int>(categories_.size()); }
  int64_t at(int gold, int predicted) const {
    return counts_[gold * size() + predicted];
  }
  int64_t& at(int gold, int predicted) { return counts_[gold * size() + predicted]; }
  int64_t Total() const;
  int64_t RowSum(int gold) const;

  bool operator==(const ConfusionMatrix& other) const = default;

 private:
  std::vector<std::string> categories_;
  std::vector<int64_t> counts_;
};

// Category of a label: "O" stays "O", B-X/I-X map to X, anything else maps to
// itself (flat tag sets).
std::string LabelCategory(const std::string& label);

// Throws kLengthMismatch, or kUnmappedLabel when a label's category is not in
// `categories`.
ConfusionMatrix BuildConfusionMatrix(const LabelSequences& gold,
                                     const LabelSequences& predicted,
                                     std::vector<std::string> categories = {
                                         "PER", "LOC", "ORG", "O"});

struct ErrorCategories {
  int64_t true_positives = 0;
  int64_t false_positives = 0;
  int64_t false_negatives = 0;
  int64_t true_negatives = 0;

  bool operator==(const ErrorCategories& other) const = default;
};

// The last category must be "O" (kUnmappedLabel otherwise). Confusions
// between two different entity categories fall in none of the four counts.
ErrorCategories ComputeErrorCategories(const ConfusionMatrix& m);

// Percent change per field, positive meaning better: increases for TP/TN,
// decreases for FP/FN. Throws kDivisionByZeroBase if a base field is zero.
struct ImprovementPercent {
  double true_positives = 0.0;
  double false_positives = 0.0;
  double false_negatives = 0.0;
  double true_negatives = 0.0;
};

ImprovementPercent Improvement(const ErrorCategories& base,
                               const ErrorCategories& improved);

double RoundToOneDecimal(double value);
std::string FormatOneDecimal(double value);

}  // namespace selftag

#endif  // SELFTAG_EVAL_H_
