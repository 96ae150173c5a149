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

#include "selftag/eval.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "selftag/error.h"

namespace selftag {
namespace {

void CheckAligned(const LabelSequences& gold, const LabelSequences& predicted) {
  if (gold.size() != predicted.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                std::to_string(gold.size()) + " gold vs " +
                    std::to_string(predicted.size()) + " predicted sentences");
  }
  for (size_t i = 0; i < gold.size(); ++i) {
    if (gold[i].size() != predicted[i].size()) {
      throw Error(ErrorCode::kLengthMismatch,
                  "sentence " + std::to_string(i) + ": " +
                      std::to_string(gold[i].size()) + " gold vs " +
                      std::to_string(predicted[i].size()) + " predicted labels");
    }
  }
}

double SafeRatio(int64_t num, int64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double F1(double p, double r) { return p + r == 0.0 ? 0.0 : 2 * p * r / (p + r); }

}  // namespace

LabelSequences GoldLabels(const Dataset& gold) {
  LabelSequences out;
  out.reserve(gold.size());
  for (const auto& s : gold.sentences()) {
    if (!s.labeled()) {
      throw Error(ErrorCode::kLengthMismatch, "gold sentence without labels");
    }
    out.push_back(s.labels);
  }
  return out;
}

EvalReport SpanF1(const Dataset& gold, const LabelSequences& predicted,
                  SpanF1Options options) {
  return SpanF1(gold.scheme(), GoldLabels(gold), predicted, options);
}

EvalReport SpanF1(const TagScheme& scheme, const LabelSequences& gold,
                  const LabelSequences& predicted, SpanF1Options options) {
  if (scheme.kind() != SchemeKind::kBioEntity) {
    throw Error(ErrorCode::kNotBioScheme, "span F1 needs a BIO scheme");
  }
  CheckAligned(gold, predicted);

  std::vector<std::string> types = scheme.EntityTypes();
  std::map<std::string, TypeScores> by_type;
  for (const auto& t : types) by_type[t].type = t;

  for (size_t i = 0; i < gold.size(); ++i) {
    auto gold_spans = ExtractSpans(gold[i]);
    auto pred_spans = ExtractSpans(RepairBio(predicted[i]));
    std::set<Span> gold_set(gold_spans.begin(), gold_spans.end());
    std::set<Span> pred_set(pred_spans.begin(), pred_spans.end());
    for (const auto& s : gold_set) {
      auto& ts = by_type[s.entity_type];
      ts.type = s.entity_type;
      ++ts.support;
      if (pred_set.contains(s)) {
        ++ts.true_positives;
      } else {
        ++ts.false_negatives;
      }
    }
    for (const auto& s : pred_set) {
      if (!gold_set.contains(s)) {
        auto& ts = by_type[s.entity_type];
        ts.type = s.entity_type;
        ++ts.false_positives;
      }
    }
  }
  // Types outside the scheme (only possible from predictions) follow the
  // scheme's types in lexicographic order.
  for (const auto& [type, ts] : by_type) {
    if (std::find(types.begin(), types.end(), type) == types.end()) {
      types.push_back(type);
    }
  }

  EvalReport report;
  int64_t tp = 0, fp = 0, fn = 0;
  double macro_sum = 0.0;
  int macro_count = 0;
  for (const auto& type : types) {
    TypeScores ts = by_type[type];
    ts.precision = SafeRatio(ts.true_positives, ts.true_positives + ts.false_positives);
    ts.recall = SafeRatio(ts.true_positives, ts.true_positives + ts.false_negatives);
    ts.f1 = F1(ts.precision, ts.recall);
    tp += ts.true_positives;
    fp += ts.false_positives;
    fn += ts.false_negatives;
    if (ts.support > 0 || options.include_zero_support) {
      macro_sum += ts.f1;
      ++macro_count;
    }
    report.per_type.push_back(std::move(ts));
  }
  report.macro_f1 = macro_count == 0 ? 0.0 : macro_sum / macro_count;
  report.micro_precision = SafeRatio(tp, tp + fp);
  report.micro_recall = SafeRatio(tp, tp + fn);
  report.micro_f1 = F1(report.micro_precision, report.micro_recall);
  report.token_accuracy = TokenAccuracy(gold, predicted);
  for (const auto& s : gold) report.tokens += static_cast<int64_t>(s.size());
  return report;
}

double TokenAccuracy(const LabelSequences& gold, const LabelSequences& predicted) {
  CheckAligned(gold, predicted);
  int64_t total = 0, correct = 0;
  for (size_t i = 0; i < gold.size(); ++i) {
    for (size_t j = 0; j < gold[i].size(); ++j) {
      ++total;
      if (gold[i][j] == predicted[i][j]) ++correct;
    }
  }
  return SafeRatio(correct, total);
}

double TaskMetric(const TagScheme& scheme, const LabelSequences& gold,
                  const LabelSequences& predicted) {
  if (scheme.kind() == SchemeKind::kBioEntity) {
    return SpanF1(scheme, gold, predicted).macro_f1;
  }
  return TokenAccuracy(gold, predicted);
}

nlohmann::ordered_json EvalReport::ToJson() const {
  nlohmann::ordered_json j;
  j["macro_f1"] = macro_f1;
  j["micro_precision"] = micro_precision;
  j["micro_recall"] = micro_recall;
  j["micro_f1"] = micro_f1;
  j["token_accuracy"] = token_accuracy;
  j["tokens"] = tokens;
  auto& types = j["per_type"];
  types = nlohmann::ordered_json::array();
  for (const auto& ts : per_type) {
    types.push_back({{"type", ts.type},
                     {"precision", ts.precision},
                     {"recall", ts.recall},
                     {"f1", ts.f1},
                     {"support", ts.support},
                     {"tp", ts.true_positives},
                     {"fp", ts.false_positives},
                     {"fn", ts.false_negatives}});
  }
  return j;
}

std::string EvalReport::ToTable() const {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-12s %9s %9s %9s %9s\n", "type",
                "precision", "recall", "f1", "support");
  out += line;
  for (const auto& ts : per_type) {
    std::snprintf(line, sizeof(line), "%-12s %9.4f %9.4f %9.4f %9lld\n",
                  ts.type.c_str(), ts.precision, ts.recall, ts.f1,
                  static_cast<long long>(ts.support));
    out += line;
  }
  std::snprintf(line, sizeof(line), "%-12s %9.4f %9.4f %9.4f\n", "micro",
                micro_precision, micro_recall, micro_f1);
  out += line;
  std::snprintf(line, sizeof(line), "%-12s %29.4f\n", "macro f1", macro_f1);
  out += line;
  std::snprintf(line, sizeof(line), "%-12s %29.4f\n", "token acc",
                token_accuracy);
  out += line;
  return out;
}

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> categories)
    : categories_(std::move(categories)),
      counts_(categories_.size() * categories_.size(), 0) {}

ConfusionMatrix ConfusionMatrix::FromRows(
    std::vector<std::string> categories,
    const std::vector<std::vector<int64_t>>& rows) {
  ConfusionMatrix m(std::move(categories));
  if (static_cast<int>(rows.size()) != m.size()) {
    throw Error(ErrorCode::kLengthMismatch, "row count differs from categories");
  }
  for (int g = 0; g < m.size(); ++g) {
    if (static_cast<int>(rows[g].size()) != m.size()) {
      throw Error(ErrorCode::kLengthMismatch,
                  "column count differs from categories");
    }
    for (int p = 0; p < m.size(); ++p) {
      if (rows[g][p] < 0) {
        throw Error(ErrorCode::kLengthMismatch, "negative count");
      }
      m.at(g, p) = rows[g][p];
    }
  }
  return m;
}

int64_t ConfusionMatrix::Total() const {
  int64_t t = 0;
  for (int64_t c : counts_) t += c;
  return t;
}

int64_t ConfusionMatrix::RowSum(int gold) const {
  int64_t t = 0;
  for (int p = 0; p < size(); ++p) t += at(gold, p);
  return t;
}

std::string LabelCategory(const std::string& label) {
  if (label.size() > 2 && (label[0] == 'B' || label[0] == 'I') &&
      label[1] == '-') {
    return label.substr(2);
  }
  return label;
}

ConfusionMatrix BuildConfusionMatrix(const LabelSequences& gold,
                                     const LabelSequences& predicted,
                                     std::vector<std::string> categories) {
  CheckAligned(gold, predicted);
  ConfusionMatrix m(std::move(categories));
  auto index_of = [&m](const std::string& label) {
    std::string cat = LabelCategory(label);
    const auto& cats = m.categories();
    auto it = std::find(cats.begin(), cats.end(), cat);
    if (it == cats.end()) {
      throw Error(ErrorCode::kUnmappedLabel,
                  "label '" + label + "' has no category");
    }
    return static_cast<int>(it - cats.begin());
  };
  for (size_t i = 0; i < gold.size(); ++i) {
    for (size_t j = 0; j < gold[i].size(); ++j) {
      ++m.at(index_of(gold[i][j]), index_of(predicted[i][j]));
    }
  }
  return m;
}

ErrorCategories ComputeErrorCategories(const ConfusionMatrix& m) {
  const int k = m.size();
  if (k == 0 || m.categories().back() != "O") {
    throw Error(ErrorCode::kUnmappedLabel, "last category must be \"O\"");
  }
  const int o = k - 1;
  ErrorCategories e;
  for (int c = 0; c < o; ++c) {
    e.true_positives += m.at(c, c);
    e.false_positives += m.at(o, c);
    e.false_negatives += m.at(c, o);
  }
  e.true_negatives = m.at(o, o);
  return e;
}

ImprovementPercent Improvement(const ErrorCategories& base,
                               const ErrorCategories& improved) {
  auto pct = [](int64_t from, int64_t to, bool lower_is_better,
                const char* field) {
    if (from == 0) {
      throw Error(ErrorCode::kDivisionByZeroBase,
                  std::string("base ") + field + " is zero");
    }
    const int64_t delta = lower_is_better ? from - to : to - from;
    return 100.0 * static_cast<double>(delta) / static_cast<double>(from);
  };
  ImprovementPercent r;
  r.true_positives = pct(base.true_positives, improved.true_positives, false, "TP");
  r.false_positives = pct(base.false_positives, improved.false_positives, true, "FP");
  r.false_negatives = pct(base.false_negatives, improved.false_negatives, true, "FN");
  r.true_negatives = pct(base.true_negatives, improved.true_negatives, false, "TN");
  return r;
}

double RoundToOneDecimal(double value) {
  double r = std::round(value * 10.0) / 10.0;
  return r == 0.0 ? 0.0 : r;
}

std::string FormatOneDecimal(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.1f", RoundToOneDecimal(value));
  return buf;
}

}  // namespace selftag
