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

#include "selftag/selftrain.h"

#include <charconv>
#include <cmath>
#include <limits>

#include "selftag/error.h"
#include "selftag/eval.h"

namespace selftag {
namespace {

std::string FormatMetric(double value) {
  if (std::isnan(value)) return "NA";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

}  // namespace

void SelfTrainConfig::Validate() const {
  if (epochs_per_iteration < 1 || patience < 1 || max_iterations < 1) {
    throw Error(ErrorCode::kInvalidConfig,
                "self-training needs epochs_per_iteration, patience and "
                "max_iterations >= 1");
  }
  PhaseConfig().Validate();
}

TrainConfig SelfTrainConfig::PhaseConfig() const {
  TrainConfig c = tagger;
  c.epochs = epochs_per_iteration;
  c.seed = seed;
  return c;
}

std::string_view StopReasonName(StopReason reason) {
  switch (reason) {
    case StopReason::kUnlabeledExhausted: return "unlabeled_exhausted";
    case StopReason::kNoPromotions: return "no_promotions";
    case StopReason::kMaxIterations: return "max_iterations";
    case StopReason::kPatience: return "patience";
  }
  return "?";
}

SelfTrainResult SelfTrain(const Dataset& labeled, const Dataset& unlabeled,
                          const Dataset& dev, const SelfTrainConfig& config) {
  config.Validate();
  if (labeled.empty()) {
    throw Error(ErrorCode::kEmptyLabeledSet, "self-training needs labeled data");
  }
  if (!(labeled.scheme() == unlabeled.scheme()) ||
      (!dev.empty() && !(labeled.scheme() == dev.scheme()))) {
    throw Error(ErrorCode::kSchemeMismatch,
                "labeled, unlabeled and dev sets use different tag schemes");
  }
  const TagScheme& scheme = labeled.scheme();
  const bool is_bio = scheme.kind() == SchemeKind::kBioEntity;
  const TrainConfig phase_config = config.PhaseConfig();
  const bool has_dev = !dev.empty();

  std::vector<LabeledSentence> pool_l = labeled.sentences();
  std::vector<LabeledSentence> pool_u = unlabeled.StripLabels().sentences();

  TaggerModel model(scheme, config.templates);
  SelfTrainResult result{model, {}, 0,
                         -std::numeric_limits<double>::infinity(),
                         StopReason::kMaxIterations,
                         Dataset(scheme, {}, Role::kLabeled),
                         Dataset(scheme, {}, Role::kUnlabeled)};
  int since_improved = 0;

  for (int iteration = 1;; ++iteration) {
    Dataset current_l(scheme, pool_l, Role::kLabeled);
    TaggerModel start = config.reinit_each_iteration
                            ? TaggerModel(scheme, config.templates)
                            : std::move(model);
    TrainResult trained = Train(std::move(start), current_l, dev, phase_config);
    model = std::move(trained.model);

    IterationRecord rec;
    rec.iteration = iteration;
    rec.labeled_size = pool_l.size();
    rec.unlabeled_size = pool_u.size();
    rec.inner_epochs = static_cast<int>(trained.history.size());
    rec.dev_metric = has_dev ? EvaluateTaskMetric(model, dev)
                             : std::numeric_limits<double>::quiet_NaN();
    if (!has_dev || rec.dev_metric > result.best_dev_metric) {
      result.best_dev_metric = rec.dev_metric;
      result.best_iteration = iteration;
      result.model = model;
      since_improved = 0;
    } else {
      ++since_improved;
    }

    std::optional<StopReason> stop;
    if (pool_u.empty()) {
      stop = StopReason::kUnlabeledExhausted;
    } else if (since_improved >= config.patience) {
      stop = StopReason::kPatience;
    } else if (iteration > config.max_iterations) {
      stop = StopReason::kMaxIterations;
    }
    if (stop) {
      result.history.push_back(rec);
      result.stop_reason = *stop;
      break;
    }

    std::vector<ScoredSentence> candidates;
    candidates.reserve(pool_u.size());
    for (auto& s : pool_u) {
      Prediction p = PredictWithConfidence(model, s.tokens);
      candidates.push_back({std::move(s), std::move(p)});
    }
    SelectionResult sel = Select(std::move(candidates), config.policy);

    double conf_sum = 0.0;
    double conf_min = std::numeric_limits<double>::infinity();
    for (auto& c : sel.selected) {
      const double conf = c.prediction.min_confidence;
      conf_sum += conf;
      conf_min = std::min(conf_min, conf);
      LabeledSentence promoted;
      promoted.tokens = std::move(c.sentence.tokens);
      promoted.labels = is_bio ? RepairBio(c.prediction.labels)
                               : std::move(c.prediction.labels);
      promoted.provenance = Provenance::Pseudo(iteration, conf);
      pool_l.push_back(std::move(promoted));
    }
    pool_u.clear();
    for (auto& c : sel.remaining) pool_u.push_back(std::move(c.sentence));

    rec.promoted = sel.selected.size();
    if (!sel.selected.empty()) {
      rec.min_confidence = conf_min;
      rec.mean_confidence = conf_sum / static_cast<double>(sel.selected.size());
    }
    result.history.push_back(rec);
    if (sel.selected.empty()) {
      result.stop_reason = StopReason::kNoPromotions;
      break;
    }
  }

  if (!has_dev) result.model = model;
  result.final_labeled = Dataset(scheme, std::move(pool_l), Role::kLabeled);
  result.final_unlabeled = Dataset(scheme, std::move(pool_u), Role::kUnlabeled);
  return result;
}

std::string HistoryTsv(const std::vector<IterationRecord>& history) {
  std::string out = "iter\tL_size\tU_size\tpromoted\tdev_metric\tmin_conf\tmean_conf\n";
  for (const auto& r : history) {
    out += std::to_string(r.iteration) + '\t' + std::to_string(r.labeled_size) +
           '\t' + std::to_string(r.unlabeled_size) + '\t' +
           std::to_string(r.promoted) + '\t' + FormatMetric(r.dev_metric) +
           '\t' +
           (r.min_confidence ? FormatMetric(*r.min_confidence) : "NA") + '\t' +
           (r.mean_confidence ? FormatMetric(*r.mean_confidence) : "NA") + '\n';
  }
  return out;
}

}  // namespace selftag
