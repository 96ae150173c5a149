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


#include "oracles.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "selftag/features.h"

namespace selftag::testing {
namespace {

std::string TypeOf(const std::string& label) { return label.substr(2); }
bool IsB(const std::string& label) { return label.rfind("B-", 0) == 0; }
bool IsI(const std::string& label) { return label.rfind("I-", 0) == 0; }

// Is labels[e..] a chunk continuation for type t?
bool Continues(std::span<const std::string> labels, size_t e, const std::string& t) {
  return e < labels.size() && IsI(labels[e]) && TypeOf(labels[e]) == t;
}

// Does a chunk of type t start at s?
bool Starts(std::span<const std::string> labels, size_t s, bool lenient) {
  if (IsB(labels[s])) return true;
  if (!lenient || !IsI(labels[s])) return false;
  if (s == 0) return true;
  const std::string& prev = labels[s - 1];
  return !((IsB(prev) || IsI(prev)) && TypeOf(prev) == TypeOf(labels[s]));
}

}  // namespace

EnumeratedLattice EnumerateLattice(const Lattice& lattice) {
  const int n = lattice.length();
  const int v = lattice.num_labels();
  EnumeratedLattice out;
  out.marginals.assign(static_cast<size_t>(n) * v, 0.0);
  std::vector<int> path(n, 0);
  std::vector<double> scores;
  std::vector<std::vector<int>> paths;
  while (true) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
      s += lattice.unary(j, path[j]);
      if (j > 0) s += lattice.transition(path[j - 1], path[j]);
    }
    scores.push_back(s);
    paths.push_back(path);
    int j = n - 1;
    while (j >= 0 && ++path[j] == v) path[j--] = 0;
    if (j < 0) break;
  }
  const double max = *std::max_element(scores.begin(), scores.end());
  double sum = 0.0;
  for (double s : scores) sum += std::exp(s - max);
  out.log_z = max + std::log(sum);
  for (size_t p = 0; p < paths.size(); ++p) {
    const double prob = std::exp(scores[p] - out.log_z);
    for (int j = 0; j < n; ++j) out.marginals[j * v + paths[p][j]] += prob;
  }
  // Best path: highest score, then lowest label at the latest differing position.
  size_t best = 0;
  for (size_t p = 1; p < paths.size(); ++p) {
    if (scores[p] > scores[best]) {
      best = p;
    } else if (scores[p] == scores[best]) {
      for (int j = n - 1; j >= 0; --j) {
        if (paths[p][j] != paths[best][j]) {
          if (paths[p][j] < paths[best][j]) best = p;
          break;
        }
      }
    }
  }
  out.best_path = paths[best];
  out.best_score = scores[best];
  return out;
}

Lattice RandomLattice(std::mt19937_64& rng, int n, int v, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Lattice lat(n, v);
  for (int j = 0; j < n; ++j) {
    for (int y = 0; y < v; ++y) lat.unary(j, y) = u(rng);
  }
  for (int a = 0; a < v; ++a) {
    for (int b = 0; b < v; ++b) lat.transition(a, b) = u(rng);
  }
  return lat;
}

Lattice RandomIntegerLattice(std::mt19937_64& rng, int n, int v) {
  std::uniform_int_distribution<int> u(-1, 1);
  Lattice lat(n, v);
  for (int j = 0; j < n; ++j) {
    for (int y = 0; y < v; ++y) lat.unary(j, y) = u(rng);
  }
  for (int a = 0; a < v; ++a) {
    for (int b = 0; b < v; ++b) lat.transition(a, b) = u(rng);
  }
  return lat;
}

ModelAndBatch RandomModelAndBatch(std::mt19937_64& rng) {
  static const std::vector<std::string> kVocab = {
      "Ali", "cairo", "Cairo", "went", "to", "2024", ",", ".", "Mona", "bank",
      "ahmed", "Dubai", "x9", "ok", "!", "the"};
  std::uniform_int_distribution<int> coin(0, 1);
  const std::vector<std::string> types =
      coin(rng) ? std::vector<std::string>{"PER"} : std::vector<std::string>{"PER", "LOC"};
  TagScheme scheme = TagScheme::Bio(types);

  std::vector<FeatureTemplate> all = DefaultTemplates();
  std::vector<FeatureTemplate> templates;
  for (const auto& t : all) {
    if (coin(rng) || t.kind == TemplateKind::kWord) templates.push_back(t);
  }

  std::uniform_int_distribution<int> len(1, 5);
  std::uniform_int_distribution<int> count(1, 4);
  std::uniform_int_distribution<size_t> word(0, kVocab.size() - 1);
  std::vector<LabeledSentence> batch(count(rng));
  for (auto& s : batch) {
    const int n = len(rng);
    std::uniform_int_distribution<int> lab(0, scheme.size() - 1);
    for (int j = 0; j < n; ++j) {
      s.tokens.push_back(kVocab[word(rng)]);
      std::string l = scheme.label(lab(rng));
      if (IsI(l) && (j == 0 || s.labels.back() == "O" ||
                     TypeOf(s.labels.back()) != TypeOf(l))) {
        l = "B-" + TypeOf(l);
      }
      s.labels.push_back(l);
    }
  }

  TaggerModel model(scheme, templates);
  GrowDictionary(model, Dataset(scheme, batch, Role::kLabeled));
  model.AddFeature("w0=unseen");
  std::uniform_real_distribution<double> w(-1.0, 1.0);
  for (size_t p = 0; p < model.num_parameters(); ++p) model.parameter(p) = w(rng);
  std::uniform_real_distribution<double> l2(0.0, 0.5);
  return {std::move(model), std::move(batch), l2(rng)};
}

GradientCheckResult CheckGradient(const TaggerModel& model,
                                  std::span<const LabeledSentence> batch, double l2,
                                  double h) {
  GradientCheckResult out;
  const std::vector<double> analytic =
      LogLikelihoodAndGradient(model, batch, l2).gradient;
  TaggerModel probe = model;
  for (size_t p = 0; p < model.num_parameters(); ++p) {
    const double w = model.parameter(p);
    probe.parameter(p) = w + h;
    const double plus = LogLikelihoodAndGradient(probe, batch, l2).objective;
    probe.parameter(p) = w - h;
    const double minus = LogLikelihoodAndGradient(probe, batch, l2).objective;
    probe.parameter(p) = w;
    const double numeric = (plus - minus) / (2.0 * h);
    const double a = analytic[p];
    const double scale = std::max(std::abs(a), std::abs(numeric));
    const double rel = scale < 1e-9 ? 0.0 : std::abs(a - numeric) / scale;
    out.max_relative_error = std::max(out.max_relative_error, rel);
    ++out.coordinates;
  }
  return out;
}

std::vector<Span> ScanSpans(std::span<const std::string> labels, bool lenient) {
  std::vector<Span> out;
  for (size_t s = 0; s < labels.size(); ++s) {
    if (labels[s] == "O" || !Starts(labels, s, lenient)) continue;
    const std::string t = TypeOf(labels[s]);
    for (size_t e = s + 1; e <= labels.size(); ++e) {
      bool inside = true;
      for (size_t k = s + 1; k < e; ++k) inside = inside && Continues(labels, k, t);
      if (inside && !Continues(labels, e, t)) {
        out.push_back({t, static_cast<int>(s), static_cast<int>(e)});
      }
    }
  }
  return out;
}

std::map<std::string, SpanCounts> SpanSetCounts(const LabelSequences& gold,
                                                const LabelSequences& pred) {
  std::map<std::string, SpanCounts> out;
  for (size_t i = 0; i < gold.size(); ++i) {
    auto g = ScanSpans(gold[i], false);
    auto p = ScanSpans(pred[i], true);
    std::set<Span> gs(g.begin(), g.end()), ps(p.begin(), p.end());
    for (const auto& s : gs) {
      ++out[s.entity_type].support;
      if (ps.contains(s)) {
        ++out[s.entity_type].tp;
      } else {
        ++out[s.entity_type].fn;
      }
    }
    for (const auto& s : ps) {
      if (!gs.contains(s)) ++out[s.entity_type].fp;
    }
  }
  return out;
}

std::vector<std::vector<std::string>> EnumerateSequences(
    const std::vector<std::string>& alphabet, int n, bool valid_bio_only) {
  std::vector<std::vector<std::string>> out;
  std::vector<size_t> idx(n, 0);
  while (true) {
    std::vector<std::string> seq;
    for (size_t i : idx) seq.push_back(alphabet[i]);
    bool valid = true;
    for (int j = 0; j < n && valid_bio_only; ++j) {
      if (IsI(seq[j]) && (j == 0 || seq[j - 1] == "O" ||
                          TypeOf(seq[j - 1]) != TypeOf(seq[j]))) {
        valid = false;
      }
    }
    if (valid) out.push_back(std::move(seq));
    int j = n - 1;
    while (j >= 0 && ++idx[j] == alphabet.size()) idx[j--] = 0;
    if (j < 0) break;
  }
  return out;
}

const std::vector<SpanFixture>& TenPairFixture() {
  static const std::vector<SpanFixture> kPairs = {
      {{"B-PER", "I-PER", "O"}, {"B-PER", "I-PER", "O"}},
      {{"B-PER", "I-PER"}, {"B-PER", "O"}},
      {{"B-LOC", "O", "B-ORG"}, {"B-LOC", "O", "B-LOC"}},
      {{"O", "O", "O"}, {"B-PER", "O", "O"}},
      {{"B-ORG", "I-ORG", "I-ORG"}, {"B-ORG", "I-ORG", "B-ORG"}},
      {{"B-PER", "B-PER"}, {"B-PER", "I-PER"}},
      {{"O", "B-LOC", "I-LOC"}, {"O", "I-LOC", "I-LOC"}},
      {{"B-PER", "O", "B-LOC"}, {"B-LOC", "O", "B-PER"}},
      {{"B-ORG", "I-ORG", "O", "B-PER"}, {"B-ORG", "I-ORG", "O", "B-PER"}},
      {{"B-LOC", "I-LOC", "I-LOC", "O"}, {"B-LOC", "I-PER", "I-LOC", "O"}},
  };
  return kPairs;
}

// Pair by pair:
//  1 PER tp            6 PER fp 1, fn 2
//  2 PER fp, fn        7 LOC tp (I-LOC opens the chunk)
//  3 LOC tp, fp; ORG fn 8 PER fp, fn; LOC fp, fn
//  4 PER fp            9 ORG tp; PER tp
//  5 ORG fn 1, fp 2   10 LOC fn 1, fp 2; PER fp
const std::vector<SpanFixtureTotals>& TenPairTotals() {
  static const std::vector<SpanFixtureTotals> kTotals = {
      {"PER", 2, 5, 4}, {"LOC", 2, 4, 2}, {"ORG", 1, 2, 2}};
  return kTotals;
}

ConfusionMatrix FineTunedMatrix() {
  return ConfusionMatrix::FromRows({"PER", "LOC", "ORG", "O"},
                                   {{117, 2, 2, 66},
                                    {11, 33, 1, 39},
                                    {5, 5, 5, 57},
                                    {130, 14, 15, 5940}});
}

ConfusionMatrix SelfTrainedMatrix() {
  return ConfusionMatrix::FromRows({"PER", "LOC", "ORG", "O"},
                                   {{120, 3, 2, 62},
                                    {10, 34, 0, 40},
                                    {5, 6, 11, 66},
                                    {54, 8, 2, 6035}});
}

Dataset RandomDataset(std::mt19937_64& rng, const TagScheme& scheme, int sentences,
                      bool labeled) {
  static const std::vector<std::string> kVocab = {
      "Ali", "القاهرة", "went", "to", "2024", ",", ".", "Mona", "x-ray", "ok!",
      "é", "naïve", "100%", "a#b", "(", "Dubai", "يا", "lol"};
  std::uniform_int_distribution<int> len(1, 8);
  std::uniform_int_distribution<size_t> word(0, kVocab.size() - 1);
  std::uniform_int_distribution<int> lab(0, scheme.size() - 1);
  const bool bio = scheme.kind() == SchemeKind::kBioEntity;
  std::vector<LabeledSentence> out(sentences);
  for (auto& s : out) {
    const int n = len(rng);
    for (int j = 0; j < n; ++j) {
      s.tokens.push_back(kVocab[word(rng)]);
      if (!labeled) continue;
      std::string l = scheme.label(lab(rng));
      if (bio && IsI(l) &&
          (j == 0 || s.labels.back() == "O" || TypeOf(s.labels.back()) != TypeOf(l))) {
        l = "B-" + TypeOf(l);
      }
      s.labels.push_back(l);
    }
  }
  return Dataset(scheme, std::move(out), labeled ? Role::kLabeled : Role::kUnlabeled);
}

}  // namespace selftag::testing
