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


// Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>

#include "oracles.h"
#include "selftag/corpus.h"
#include "selftag/eval.h"
#include "selftag/harness.h"
#include "selftag/lattice.h"
#include "selftag/selection.h"
#include "selftag/selftrain.h"
#include "selftag/synthetic.h"
#include "selftag/tagger.h"

namespace selftag {
namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void Emit(const std::string& name, const Outcome& o) {
  std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::string Fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), format, args...);
  return buf;
}

Outcome LatticeOracle() {
  const auto start = Clock::now();
  std::mt19937_64 rng(20261015);
  std::uniform_int_distribution<int> n_dist(1, 6), v_dist(1, 4);
  double worst = 0.0;
  int mismatched_paths = 0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    const int n = n_dist(rng), v = v_dist(rng);
    Lattice lat = t % 4 == 3 ? testing::RandomIntegerLattice(rng, n, v)
                             : testing::RandomLattice(rng, n, v, 4.0);
    auto fb = ForwardBackward(lat);
    auto vit = Viterbi(lat);
    auto ref = testing::EnumerateLattice(lat);
    worst = std::max(worst, std::abs(fb.log_z - ref.log_z));
    for (size_t k = 0; k < ref.marginals.size(); ++k) {
      worst = std::max(worst, std::abs(fb.marginals[k] - ref.marginals[k]));
    }
    worst = std::max(worst, std::abs(vit.score - ref.best_score));
    if (vit.path != ref.best_path) ++mismatched_paths;
  }
  const double secs = Seconds(start);
  return {worst < 1e-8 && mismatched_paths == 0 && secs < 30.0,
          Fmt("%d lattices, max abs error %.3g, %d path mismatches, %.2f s", trials,
              worst, mismatched_paths, secs)};
}

Outcome GradientOracle() {
  const auto start = Clock::now();
  std::mt19937_64 rng(7);
  double worst = 0.0;
  size_t coords = 0;
  const int pairs = 150;
  for (int t = 0; t < pairs; ++t) {
    auto mb = testing::RandomModelAndBatch(rng);
    auto r = testing::CheckGradient(mb.model, mb.batch, mb.l2, 1e-5);
    worst = std::max(worst, r.max_relative_error);
    coords += r.coordinates;
  }
  const double secs = Seconds(start);
  return {worst < 1e-4 && secs < 60.0,
          Fmt("%d (model, batch) pairs, %zu coordinates, max relative error %.3g, %.2f s",
              pairs, coords, worst, secs)};
}

Outcome MetricFixtures() {
  TagScheme ner = TagScheme::Bio(std::vector<std::string>{"PER", "LOC", "ORG"});
  LabelSequences g, p;
  for (const auto& pair : testing::TenPairFixture()) {
    g.push_back(pair.gold);
    p.push_back(pair.pred);
  }
  EvalReport r = SpanF1(ner, g, p);
  bool fixture_ok = true;
  for (const auto& want : testing::TenPairTotals()) {
    for (const auto& t : r.per_type) {
      if (t.type != want.type) continue;
      const double prec = static_cast<double>(want.tp) / (want.tp + want.fp);
      const double rec = static_cast<double>(want.tp) / (want.tp + want.fn);
      fixture_ok = fixture_ok && t.true_positives == want.tp &&
                   t.false_positives == want.fp && t.false_negatives == want.fn &&
                   t.precision == prec && t.recall == rec &&
                   t.f1 == 2.0 * prec * rec / (prec + rec);
    }
  }

  TagScheme pl = TagScheme::Bio(std::vector<std::string>{"PER", "LOC"});
  const std::vector<std::string> alphabet = {"O", "B-PER", "I-PER", "B-LOC", "I-LOC"};
  int64_t pairs = 0, bad = 0;
  for (int n = 1; n <= 4; ++n) {
    auto golds = testing::EnumerateSequences(alphabet, n, true);
    auto preds = testing::EnumerateSequences(alphabet, n, false);
    for (const auto& gs : golds) {
      for (const auto& ps : preds) {
        ++pairs;
        LabelSequences gg = {gs}, pp = {ps};
        EvalReport e = SpanF1(pl, gg, pp);
        auto want = testing::SpanSetCounts(gg, pp);
        for (const auto& t : e.per_type) {
          const auto& w = want[t.type];
          if (t.true_positives != w.tp || t.false_positives != w.fp ||
              t.false_negatives != w.fn) {
            ++bad;
            break;
          }
        }
      }
    }
  }
  return {fixture_ok && bad == 0,
          Fmt("10-pair fixture %s; %lld exhaustive pairs, %lld mismatches",
              fixture_ok ? "exact" : "MISMATCH", static_cast<long long>(pairs),
              static_cast<long long>(bad))};
}

Outcome PaperArithmetic() {
  ErrorCategories ft = ComputeErrorCategories(testing::FineTunedMatrix());
  ErrorCategories st = ComputeErrorCategories(testing::SelfTrainedMatrix());
  ImprovementPercent imp = Improvement(ft, st);
  const bool ok = ft == ErrorCategories{155, 159, 162, 5940} &&
                  st == ErrorCategories{165, 64, 168, 6035} &&
                  FormatOneDecimal(imp.false_positives) == "59.7" &&
                  FormatOneDecimal(imp.false_negatives) == "-3.7";
  return {ok, Fmt("FT (%lld, %lld, %lld, %lld), ST (%lld, %lld, %lld, %lld); "
                  "TP %s%%, FP %s%%, FN %s%%, TN %s%%",
                  (long long)ft.true_positives, (long long)ft.false_positives,
                  (long long)ft.false_negatives, (long long)ft.true_negatives,
                  (long long)st.true_positives, (long long)st.false_positives,
                  (long long)st.false_negatives, (long long)st.true_negatives,
                  FormatOneDecimal(imp.true_positives).c_str(),
                  FormatOneDecimal(imp.false_positives).c_str(),
                  FormatOneDecimal(imp.false_negatives).c_str(),
                  FormatOneDecimal(imp.true_negatives).c_str())};
}

Outcome SelectionLaws() {
  std::mt19937_64 rng(99);
  int violations = 0;
  const int lists = 1000;
  for (int t = 0; t < lists; ++t) {
    std::vector<double> c(rng() % 50);
    for (double& x : c) x = static_cast<double>(rng() % 41) / 40.0;
    const double t1 = 0.01 + 0.97 * static_cast<double>(rng() % 1000) / 1000.0;
    const double t2 = std::min(0.99, t1 + 0.005 * static_cast<double>(rng() % 40));
    auto lo = SelectByConfidence(c, SelectionPolicy::Threshold(t1));
    auto hi = SelectByConfidence(c, SelectionPolicy::Threshold(t2));
    for (size_t i : hi.selected) {
      violations += std::find(lo.selected.begin(), lo.selected.end(), i) == lo.selected.end();
    }
    const int s = 1 + static_cast<int>(rng() % 60);
    auto f = SelectByConfidence(c, SelectionPolicy::FixedSize(s));
    violations += f.selected.size() != std::min<size_t>(s, c.size());
    for (size_t a : f.selected) {
      for (size_t b : f.remaining) {
        violations += c[a] < c[b] || (c[a] == c[b] && a > b);
      }
    }
    for (const auto* r : {&lo, &hi, &f}) {
      std::vector<size_t> all = r->selected;
      all.insert(all.end(), r->remaining.begin(), r->remaining.end());
      std::sort(all.begin(), all.end());
      bool partition = all.size() == c.size();
      for (size_t i = 0; partition && i < all.size(); ++i) partition = all[i] == i;
      violations += !partition;
    }
  }
  return {violations == 0, Fmt("%d random lists, %d violations", lists, violations)};
}

// Checks one self-training run against its inputs.
int ConservationViolations(const Dataset& labeled, const Dataset& unlabeled,
                           const SelfTrainResult& r) {
  int bad = 0;
  const size_t total = labeled.size() + unlabeled.size();
  for (size_t i = 0; i < r.history.size(); ++i) {
    const auto& h = r.history[i];
    bad += h.labeled_size + h.unlabeled_size != total;
    if (i > 0) bad += h.labeled_size != r.history[i - 1].labeled_size + r.history[i - 1].promoted;
  }
  bad += r.final_labeled.size() + r.final_unlabeled.size() != total;
  for (size_t i = 0; i < labeled.size() && i < r.final_labeled.size(); ++i) {
    bad += !(r.final_labeled[i] == labeled[i]);
  }
  std::multiset<std::vector<std::string>> before, after;
  for (const auto& s : unlabeled.sentences()) before.insert(s.tokens);
  for (size_t i = labeled.size(); i < r.final_labeled.size(); ++i) {
    after.insert(r.final_labeled[i].tokens);
    bad += !r.final_labeled[i].provenance.is_pseudo();
  }
  for (const auto& s : r.final_unlabeled.sentences()) after.insert(s.tokens);
  bad += before != after;
  return bad;
}

Outcome SelfTrainConservation(const ExperimentConfig& config) {
  const auto start = Clock::now();
  int runs = 0, bad = 0, nondeterministic = 0, rewritten = 0;
  for (uint64_t seed : config.seeds) {
    ExperimentData d = LoadExperimentData(config, seed);
    for (const auto& policy : config.grid) {
      SelfTrainConfig st = config.self_train;
      st.policy = policy;
      st.seed = seed;
      SelfTrainResult a = SelfTrain(d.labeled, d.unlabeled, d.target_dev, st);
      SelfTrainResult b = SelfTrain(d.labeled, d.unlabeled, d.target_dev, st);
      ++runs;
      bad += ConservationViolations(d.labeled, d.unlabeled, a);
      nondeterministic += HistoryTsv(a.history) != HistoryTsv(b.history) ||
                          a.model.Serialize() != b.model.Serialize() ||
                          WriteConll(a.final_labeled) != WriteConll(b.final_labeled);
      // Pseudo-labels fixed at promotion: a run stopped after two rounds is a
      // prefix of the full run.
      SelfTrainConfig shorter = st;
      shorter.max_iterations = 2;
      SelfTrainResult c = SelfTrain(d.labeled, d.unlabeled, d.target_dev, shorter);
      for (size_t i = 0; i < c.final_labeled.size(); ++i) {
        rewritten += i >= a.final_labeled.size() || !(c.final_labeled[i] == a.final_labeled[i]);
      }
    }
  }
  return {bad == 0 && nondeterministic == 0 && rewritten == 0,
          Fmt("%d runs: %d conservation violations, %d rewritten pseudo-labels, "
              "%d non-identical reruns, %.1f s",
              runs, bad, rewritten, nondeterministic, Seconds(start))};
}

void Directional(const ExperimentConfig& config) {
  const auto start = Clock::now();
  const size_t seeds = config.seeds.size();

  // (a) zero-shot gap on every seed.
  Report zs = RunZeroShot(config);
  int gap_ok = 0;
  std::string gaps;
  for (size_t i = 0; i < zs.num_rows(); ++i) {
    if (zs.Text(i, "split") != "gap_test") continue;
    const double gap = 100.0 * zs.Real(i, "value");
    gap_ok += gap > 5.0;
    gaps += Fmt("%s%.1f", gaps.empty() ? "" : ", ", gap);
  }

  // (b) best grid point beats the zero-shot baseline on target dev.
  Report grid = RunSelfTrainGrid(config);
  int grid_ok = 0;
  std::string deltas;
  for (uint64_t seed : config.seeds) {
    double best = -1.0, base = 0.0;
    for (size_t i = 0; i < grid.num_rows(); ++i) {
      if (grid.Int(i, "seed") != static_cast<int64_t>(seed)) continue;
      best = std::max(best, grid.Real(i, "target_dev"));
      base = grid.Real(i, "zero_shot_target_dev");
    }
    grid_ok += best > base;
    deltas += Fmt("%s%+.1f", deltas.empty() ? "" : ", ", 100.0 * (best - base));
  }

  // (c) few-shot: self-training at least matches fine-tuning at every fraction.
  FewShotReports few = RunFewShot(config);
  int few_ok = 0;
  std::string per_seed;
  for (uint64_t seed : config.seeds) {
    int fractions_ok = 0, fractions = 0;
    for (size_t i = 0; i < few.per_seed.num_rows(); ++i) {
      if (few.per_seed.Int(i, "seed") != static_cast<int64_t>(seed)) continue;
      ++fractions;
      fractions_ok += few.per_seed.Real(i, "selftrain_dev") >=
                      few.per_seed.Real(i, "finetune_dev");
    }
    few_ok += fractions_ok == fractions;
    per_seed += Fmt("%s%d/%d", per_seed.empty() ? "" : ", ", fractions_ok, fractions);
  }
  const double secs = Seconds(start);

  const size_t need = (4 * seeds + 4) / 5;  // 4 of 5
  Emit("directional (a) zero-shot gap > 5 points on every seed",
         {gap_ok == static_cast<int>(seeds),
          Fmt("test macro-F1 gaps [%s] points", gaps.c_str())});
  Emit("directional (b) best grid point beats zero-shot target dev",
         {grid_ok >= static_cast<int>(need),
          Fmt("%d/%zu seeds; best minus baseline [%s] points", grid_ok, seeds,
              deltas.c_str())});
  Emit("directional (c) few-shot self-train >= fine-tune at every fraction",
         {few_ok >= static_cast<int>(need),
          Fmt("%d/%zu seeds; fractions won per seed [%s]", few_ok, seeds,
              per_seed.c_str())});
  Emit("directional runtime < 10 minutes", {secs < 600.0, Fmt("%.1f s", secs)});
}

Outcome AblationDirection(const ExperimentConfig& config) {
  Report r = RunAblation(config);
  double target = 0.0, source = 0.0;
  for (size_t i = 0; i < r.num_rows(); ++i) {
    if (r.Text(i, "tau") != "avg") continue;
    (r.Text(i, "pool") == "target" ? target : source) = r.Real(i, "target_dev_mean");
  }
  return {target > source,
          Fmt("mean target dev macro-F1 %.4f with target pool vs %.4f with source pool",
              target, source)};
}

Outcome RoundTrips() {
  std::mt19937_64 rng(5);
  int conll_bad = 0, model_bad = 0, datasets = 0, models = 0;
  TagScheme ner = TagScheme::Bio(std::vector<std::string>{"PER", "LOC", "ORG"});
  for (int t = 0; t < 500; ++t) {
    TagScheme scheme = t % 2 ? ner : TagScheme::ArabicPos();
    Dataset ds = testing::RandomDataset(rng, scheme, 1 + t % 9, t % 7 != 0);
    ++datasets;
    conll_bad += !(ParseConll(WriteConll(ds), scheme) == ds);
  }
  for (int t = 0; t < 300; ++t) {
    auto mb = testing::RandomModelAndBatch(rng);
    ++models;
    TaggerModel back = TaggerModel::Deserialize(mb.model.Serialize());
    model_bad += !(back == mb.model) || back.Serialize() != mb.model.Serialize();
  }
  SyntheticShiftSpec spec;
  spec.labeled = 100;
  auto data = GenerateSyntheticShift(spec);
  TrainConfig c;
  TaggerModel trained = Train(data.labeled, data.target_dev, c).model;
  ++models;
  model_bad += !(TaggerModel::Deserialize(trained.Serialize()) == trained);
  return {conll_bad == 0 && model_bad == 0,
          Fmt("%d datasets (%d mismatches), %d models (%d mismatches)", datasets,
              conll_bad, models, model_bad)};
}

int Main() {
  const auto start = Clock::now();
  ExperimentConfig config = ExperimentConfig::Defaults();
  config.synthetic.shift_rate = 0.5;
  config.Validate();

  Emit("lattice oracle suite", LatticeOracle());
  Emit("gradient suite", GradientOracle());
  Emit("metric fixtures", MetricFixtures());
  Emit("error-category arithmetic", PaperArithmetic());
  Emit("selection laws", SelectionLaws());
  Emit("self-training conservation", SelfTrainConservation(config));
  Directional(config);
  Emit("ablation direction", AblationDirection(config));
  Emit("round-trip", RoundTrips());
  std::printf("%d failing, %.1f s total\n", failures, Seconds(start));
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace selftag

int main() { return selftag::Main(); }
