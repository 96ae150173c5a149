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

#include "selftag/tagger.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "selftag/error.h"
#include "selftag/eval.h"
#include "selftag/random.h"

namespace selftag {
namespace {

constexpr std::string_view kModelMagic = "selftag-model";
constexpr int kModelVersion = 1;

std::string FormatReal(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

double ParseReal(std::string_view text) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kModelFormat, "bad number '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> cols;
  size_t pos = 0;
  while (true) {
    size_t tab = line.find('\t', pos);
    if (tab == std::string_view::npos) {
      cols.push_back(line.substr(pos));
      return cols;
    }
    cols.push_back(line.substr(pos, tab - pos));
    pos = tab + 1;
  }
}

// Adds the log-likelihood of `batch` (and, if `gradient` is non-null, its
// gradient) without the regularizer.
double AccumulateLogLikelihood(const TaggerModel& model,
                               std::span<const EncodedSentence> batch,
                               std::vector<double>* gradient) {
  const int v = model.num_labels();
  const size_t trans_offset = model.num_features() * v;
  double total = 0.0;
  for (const auto& s : batch) {
    if (s.gold.empty() || static_cast<int>(s.gold.size()) != s.length()) {
      throw Error(ErrorCode::kUnlabeledSentenceInBatch,
                  "training batch contains an unlabeled sentence");
    }
    Lattice lat = ScoreLattice(model, s);
    ForwardBackwardResult fb = ForwardBackward(lat);
    total += PathScore(lat, s.gold) - fb.log_z;
    if (gradient == nullptr) continue;
    auto& g = *gradient;
    for (int j = 0; j < s.length(); ++j) {
      for (int f : s.features[j]) {
        double* row = &g[static_cast<size_t>(f) * v];
        row[s.gold[j]] += 1.0;
        for (int y = 0; y < v; ++y) row[y] -= fb.marginal(j, y);
      }
      if (j == 0) continue;
      g[trans_offset + s.gold[j - 1] * v + s.gold[j]] += 1.0;
      for (int a = 0; a < v; ++a) {
        for (int b = 0; b < v; ++b) {
          g[trans_offset + a * v + b] -= PairMarginal(lat, fb, j - 1, a, b);
        }
      }
    }
  }
  return total;
}

double SquaredNorm(const TaggerModel& model) {
  double sq = 0.0;
  for (size_t p = 0; p < model.num_parameters(); ++p) {
    double w = model.parameter(p);
    sq += w * w;
  }
  return sq;
}

void SetParameters(TaggerModel& model, std::span<const double> params) {
  for (size_t p = 0; p < params.size(); ++p) model.parameter(p) = params[p];
}

}  // namespace

void TrainConfig::Validate() const {
  if (epochs < 0 || !(learning_rate > 0.0) || !(l2 >= 0.0) ||
      batch_size < 1 || patience < 1) {
    throw Error(ErrorCode::kInvalidConfig,
                "tagger config needs epochs >= 0, learning_rate > 0, l2 >= 0, "
                "batch_size >= 1, patience >= 1");
  }
}

TaggerModel::TaggerModel(TagScheme scheme, std::vector<FeatureTemplate> templates)
    : scheme_(std::move(scheme)), templates_(std::move(templates)),
      uses_transitions_(HasLabelBigram(templates_)),
      transitions_(static_cast<size_t>(scheme_.size()) * scheme_.size(), 0.0) {}

int TaggerModel::FeatureIndex(std::string_view name) const {
  auto it = feature_index_.find(std::string(name));
  return it == feature_index_.end() ? -1 : it->second;
}

int TaggerModel::AddFeature(std::string_view name) {
  auto [it, inserted] = feature_index_.try_emplace(
      std::string(name), static_cast<int>(feature_names_.size()));
  if (inserted) {
    feature_names_.emplace_back(name);
    weights_.resize(weights_.size() + num_labels(), 0.0);
  }
  return it->second;
}

std::vector<double> TaggerModel::Parameters() const {
  std::vector<double> out(weights_);
  out.insert(out.end(), transitions_.begin(), transitions_.end());
  return out;
}

bool TaggerModel::AllFinite() const {
  for (size_t p = 0; p < num_parameters(); ++p) {
    if (!std::isfinite(parameter(p))) return false;
  }
  return true;
}

bool TaggerModel::operator==(const TaggerModel& other) const {
  return scheme_ == other.scheme_ && templates_ == other.templates_ &&
         feature_names_ == other.feature_names_ && weights_ == other.weights_ &&
         transitions_ == other.transitions_ &&
         train_config_ == other.train_config_;
}

void TaggerModel::Save(std::ostream& out) const {
  out << kModelMagic << '\t' << kModelVersion << '\n';
  out << "scheme\t" << SchemeKindName(scheme_.kind()) << '\n';
  out << "labels";
  for (const auto& label : scheme_.labels()) out << '\t' << label;
  out << '\n';
  out << "templates\t" << TemplatesToString(templates_) << '\n';
  out << "train_config\tepochs=" << train_config_.epochs
      << "\tlearning_rate=" << FormatReal(train_config_.learning_rate)
      << "\tl2=" << FormatReal(train_config_.l2)
      << "\tbatch_size=" << train_config_.batch_size
      << "\tseed=" << train_config_.seed
      << "\tpatience=" << train_config_.patience << '\n';
  out << "transitions\n";
  const int v = num_labels();
  for (int a = 0; a < v; ++a) {
    for (int b = 0; b < v; ++b) {
      if (b > 0) out << '\t';
      out << FormatReal(transition(a, b));
    }
    out << '\n';
  }
  out << "features\t" << feature_names_.size() << '\n';
  for (size_t f = 0; f < feature_names_.size(); ++f) {
    out << feature_names_[f];
    for (int y = 0; y < v; ++y) out << '\t' << FormatReal(weight(f, y));
    out << '\n';
  }
  out << "end\n";
}

std::string TaggerModel::Serialize() const {
  std::ostringstream out;
  Save(out);
  return out.str();
}

TaggerModel TaggerModel::Load(std::istream& in) {
  std::string line;
  auto next = [&](std::string_view expected_key) {
    if (!std::getline(in, line)) {
      throw Error(ErrorCode::kModelFormat,
                  "unexpected end of model file before '" +
                      std::string(expected_key) + "'");
    }
    auto cols = SplitTabs(line);
    if (!expected_key.empty() && cols[0] != expected_key) {
      throw Error(ErrorCode::kModelFormat,
                  "expected '" + std::string(expected_key) + "', got '" +
                      std::string(cols[0]) + "'");
    }
    return cols;
  };

  auto header = next(kModelMagic);
  if (header.size() != 2 || header[1] != std::to_string(kModelVersion)) {
    throw Error(ErrorCode::kModelFormat, "unsupported model version");
  }
  auto scheme_cols = next("scheme");
  if (scheme_cols.size() != 2) throw Error(ErrorCode::kModelFormat, "bad scheme line");
  SchemeKind kind = ParseSchemeKind(scheme_cols[1]);
  auto label_cols = next("labels");
  std::vector<std::string> labels(label_cols.begin() + 1, label_cols.end());
  TagScheme scheme(kind, std::move(labels));
  auto template_cols = next("templates");
  if (template_cols.size() != 2) {
    throw Error(ErrorCode::kModelFormat, "bad templates line");
  }
  TaggerModel model(scheme, ParseTemplates(template_cols[1]));

  auto config_cols = next("train_config");
  TrainConfig config;
  for (size_t i = 1; i < config_cols.size(); ++i) {
    auto kv = config_cols[i];
    size_t eq = kv.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kModelFormat, "bad train_config entry");
    }
    auto key = kv.substr(0, eq);
    auto value = kv.substr(eq + 1);
    if (key == "epochs") config.epochs = static_cast<int>(ParseReal(value));
    else if (key == "learning_rate") config.learning_rate = ParseReal(value);
    else if (key == "l2") config.l2 = ParseReal(value);
    else if (key == "batch_size") config.batch_size = static_cast<int>(ParseReal(value));
    else if (key == "seed") config.seed = std::stoull(std::string(value));
    else if (key == "patience") config.patience = static_cast<int>(ParseReal(value));
    else throw Error(ErrorCode::kModelFormat, "unknown train_config key");
  }
  model.set_train_config(config);

  next("transitions");
  const int v = model.num_labels();
  for (int a = 0; a < v; ++a) {
    auto row = next("");
    if (static_cast<int>(row.size()) != v) {
      throw Error(ErrorCode::kModelFormat, "bad transition row");
    }
    for (int b = 0; b < v; ++b) model.transition(a, b) = ParseReal(row[b]);
  }
  auto feature_cols = next("features");
  if (feature_cols.size() != 2) throw Error(ErrorCode::kModelFormat, "bad features line");
  const size_t count = std::stoull(std::string(feature_cols[1]));
  for (size_t f = 0; f < count; ++f) {
    auto row = next("");
    if (static_cast<int>(row.size()) != v + 1) {
      throw Error(ErrorCode::kModelFormat, "bad feature row");
    }
    int index = model.AddFeature(row[0]);
    if (static_cast<size_t>(index) != f) {
      throw Error(ErrorCode::kModelFormat, "duplicate feature '" +
                                               std::string(row[0]) + "'");
    }
    for (int y = 0; y < v; ++y) model.weight(f, y) = ParseReal(row[y + 1]);
  }
  next("end");
  if (!model.AllFinite()) {
    throw Error(ErrorCode::kModelFormat, "non-finite weight in model file");
  }
  return model;
}

TaggerModel TaggerModel::Deserialize(std::string_view text) {
  std::istringstream in{std::string(text)};
  return Load(in);
}

EncodedSentence Encode(const TaggerModel& model, const LabeledSentence& sentence) {
  EncodedSentence e;
  const int n = static_cast<int>(sentence.size());
  e.features.resize(n);
  for (int j = 0; j < n; ++j) {
    for (const auto& name : ExtractFeatures(sentence.tokens, j, model.templates())) {
      int f = model.FeatureIndex(name);
      if (f >= 0) e.features[j].push_back(f);
    }
  }
  if (sentence.labeled()) {
    e.gold.reserve(n);
    for (const auto& label : sentence.labels) {
      auto idx = model.scheme().IndexOf(label);
      if (!idx) {
        throw Error(ErrorCode::kUnknownLabel,
                    "label '" + label + "' not in model scheme");
      }
      e.gold.push_back(*idx);
    }
  }
  return e;
}

void GrowDictionary(TaggerModel& model, const Dataset& ds) {
  for (const auto& s : ds.sentences()) {
    for (int j = 0; j < static_cast<int>(s.size()); ++j) {
      for (const auto& name : ExtractFeatures(s.tokens, j, model.templates())) {
        model.AddFeature(name);
      }
    }
  }
}

Lattice ScoreLattice(const TaggerModel& model, const EncodedSentence& sentence) {
  const int v = model.num_labels();
  Lattice lat(sentence.length(), v);
  for (int j = 0; j < sentence.length(); ++j) {
    for (int f : sentence.features[j]) {
      for (int y = 0; y < v; ++y) lat.unary(j, y) += model.weight(f, y);
    }
  }
  for (int a = 0; a < v; ++a) {
    for (int b = 0; b < v; ++b) lat.transition(a, b) = model.transition(a, b);
  }
  return lat;
}

Lattice ScoreLattice(const TaggerModel& model, std::span<const std::string> tokens) {
  LabeledSentence s;
  s.tokens.assign(tokens.begin(), tokens.end());
  return ScoreLattice(model, Encode(model, s));
}

ObjectiveAndGradient LogLikelihoodAndGradient(
    const TaggerModel& model, std::span<const EncodedSentence> batch, double l2) {
  if (batch.empty()) {
    throw Error(ErrorCode::kEmptyTrainingSet, "empty batch");
  }
  ObjectiveAndGradient r;
  r.gradient.assign(model.num_parameters(), 0.0);
  r.objective = AccumulateLogLikelihood(model, batch, &r.gradient);
  r.objective -= 0.5 * l2 * SquaredNorm(model);
  for (size_t p = 0; p < model.num_parameters(); ++p) {
    r.gradient[p] -= l2 * model.parameter(p);
  }
  return r;
}

ObjectiveAndGradient LogLikelihoodAndGradient(
    const TaggerModel& model, std::span<const LabeledSentence> batch, double l2) {
  std::vector<EncodedSentence> encoded;
  encoded.reserve(batch.size());
  for (const auto& s : batch) {
    if (!s.labeled()) {
      throw Error(ErrorCode::kUnlabeledSentenceInBatch,
                  "training batch contains an unlabeled sentence");
    }
    encoded.push_back(Encode(model, s));
  }
  return LogLikelihoodAndGradient(model, encoded, l2);
}

TrainResult Train(TaggerModel model, const Dataset& train, const Dataset& dev,
                  const TrainConfig& config) {
  config.Validate();
  if (train.empty()) {
    throw Error(ErrorCode::kEmptyTrainingSet, "no training sentences");
  }
  if (!(train.scheme() == model.scheme())) {
    throw Error(ErrorCode::kSchemeMismatch, "training data scheme differs from model");
  }
  for (const auto& s : train.sentences()) {
    if (!s.labeled()) {
      throw Error(ErrorCode::kUnlabeledSentenceInBatch,
                  "training set contains an unlabeled sentence");
    }
  }
  if (config.epochs == 0) return TrainResult{std::move(model), {}, 0};

  GrowDictionary(model, train);
  std::vector<EncodedSentence> encoded;
  encoded.reserve(train.size());
  for (const auto& s : train.sentences()) encoded.push_back(Encode(model, s));

  const size_t n = encoded.size();
  const size_t num_params = model.num_parameters();
  const size_t trainable =
      model.uses_transitions() ? num_params : model.num_features() * model.num_labels();
  std::vector<double> accum(num_params, 0.0);
  const bool has_dev = !dev.empty();
  LabelSequences dev_gold = has_dev ? GoldLabels(dev) : LabelSequences{};

  TrainResult result{model, {}, 0};
  double best_metric = -std::numeric_limits<double>::infinity();
  std::vector<double> best_params;
  int since_improved = 0;

  std::vector<size_t> order(n);
  std::vector<EncodedSentence> batch;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), size_t{0});
    Rng rng(MixSeed(config.seed, static_cast<uint64_t>(epoch)));
    rng.Shuffle(order);
    for (size_t start = 0; start < n; start += config.batch_size) {
      const size_t end = std::min(n, start + config.batch_size);
      batch.clear();
      for (size_t i = start; i < end; ++i) batch.push_back(encoded[order[i]]);
      const double l2 = config.l2 * static_cast<double>(end - start) / n;
      auto og = LogLikelihoodAndGradient(model, batch, l2);
      for (size_t p = 0; p < trainable; ++p) {
        const double g = og.gradient[p];
        if (g == 0.0) continue;
        accum[p] += g * g;
        if (accum[p] == 0.0) continue;  // g * g underflowed
        model.parameter(p) += config.learning_rate * g / std::sqrt(accum[p]);
      }
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.objective = AccumulateLogLikelihood(model, encoded, nullptr) -
                    0.5 * config.l2 * SquaredNorm(model);
    rec.dev_metric = std::numeric_limits<double>::quiet_NaN();
    if (has_dev) {
      rec.dev_metric = TaskMetric(dev.scheme(), dev_gold, PredictLabels(model, dev));
      if (rec.dev_metric > best_metric) {
        best_metric = rec.dev_metric;
        best_params = model.Parameters();
        result.best_epoch = epoch;
        rec.improved = true;
        since_improved = 0;
      } else {
        ++since_improved;
      }
    }
    result.history.push_back(rec);
    if (has_dev && since_improved >= config.patience) break;
  }
  if (has_dev) SetParameters(model, best_params);
  model.set_train_config(config);
  result.model = std::move(model);
  return result;
}

TrainResult Train(const Dataset& train, const Dataset& dev,
                  const TrainConfig& config,
                  std::vector<FeatureTemplate> templates) {
  return Train(TaggerModel(train.scheme(), std::move(templates)), train, dev,
               config);
}

Prediction PredictWithConfidence(const TaggerModel& model,
                                 std::span<const std::string> tokens) {
  Lattice lat = ScoreLattice(model, tokens);
  ForwardBackwardResult fb = ForwardBackward(lat);
  ViterbiResult vit = Viterbi(lat);
  Prediction p;
  p.label_ids = vit.path;
  p.min_confidence = tokens.empty() ? 0.0 : 1.0;
  for (int j = 0; j < lat.length(); ++j) {
    const int y = vit.path[j];
    const double c = std::clamp(fb.marginal(j, y), 0.0, 1.0);
    p.labels.push_back(model.scheme().label(y));
    p.confidences.push_back(c);
    p.min_confidence = std::min(p.min_confidence, c);
  }
  return p;
}

std::vector<Prediction> PredictAll(const TaggerModel& model, const Dataset& ds) {
  std::vector<Prediction> out;
  out.reserve(ds.size());
  for (const auto& s : ds.sentences()) {
    out.push_back(PredictWithConfidence(model, s.tokens));
  }
  return out;
}

std::vector<std::vector<std::string>> PredictLabels(const TaggerModel& model,
                                                    const Dataset& ds) {
  std::vector<std::vector<std::string>> out;
  out.reserve(ds.size());
  for (const auto& s : ds.sentences()) {
    Lattice lat = ScoreLattice(model, s.tokens);
    ViterbiResult vit = Viterbi(lat);
    std::vector<std::string> labels;
    labels.reserve(vit.path.size());
    for (int y : vit.path) labels.push_back(model.scheme().label(y));
    out.push_back(std::move(labels));
  }
  return out;
}

double EvaluateTaskMetric(const TaggerModel& model, const Dataset& gold) {
  return TaskMetric(gold.scheme(), GoldLabels(gold), PredictLabels(model, gold));
}

}  // namespace selftag
