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

#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "oracles.h"
#include "selftag/error.h"
#include "selftag/eval.h"
#include "selftag/features.h"

namespace selftag {
namespace {

TagScheme Per() { return TagScheme::Bio(std::vector<std::string>{"PER"}); }

LabeledSentence Sent(std::vector<std::string> tokens, std::vector<std::string> labels) {
  return {std::move(tokens), std::move(labels), Provenance::Gold()};
}

// Names are capitalized pseudo-words; everything else is lowercase.
Dataset Separable(int n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::vector<std::string> names = {"Ali", "Mona", "Omar", "Sara", "Hadi"};
  const std::vector<std::string> words = {"went", "to", "the", "market", "saw", "a"};
  std::vector<LabeledSentence> out;
  for (int i = 0; i < n; ++i) {
    LabeledSentence s;
    const int len = 3 + static_cast<int>(rng() % 4);
    const int name_at = static_cast<int>(rng() % len);
    for (int j = 0; j < len; ++j) {
      if (j == name_at) {
        s.tokens.push_back(names[rng() % names.size()]);
        s.labels.push_back("B-PER");
      } else {
        s.tokens.push_back(words[rng() % words.size()]);
        s.labels.push_back("O");
      }
    }
    out.push_back(std::move(s));
  }
  return Dataset(Per(), std::move(out), Role::kLabeled);
}

TEST_CASE("zero-weight model scores an all-zero lattice") {
  TaggerModel m(Per(), DefaultTemplates());
  GrowDictionary(m, Separable(5, 1));
  std::vector<std::string> s = {"Ali", "went", "somewhere"};
  Lattice lat = ScoreLattice(m, s);
  for (double x : lat.unary_scores()) CHECK(x == 0.0);
  for (double x : lat.transition_scores()) CHECK(x == 0.0);
}

TEST_CASE("one active feature puts its weight on one cell") {
  TaggerModel m(Per(), ParseTemplates("w0"));
  const int f = m.AddFeature("w0=Ali");
  const int per = *Per().IndexOf("B-PER");
  m.weight(f, per) = 2.0;
  std::vector<std::string> s = {"Ali"};
  Lattice lat = ScoreLattice(m, s);
  for (int y = 0; y < m.num_labels(); ++y) {
    CHECK(lat.unary(0, y) == (y == per ? 2.0 : 0.0));
  }
}

TEST_CASE("lattice scores are additive in the weights") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    auto a = testing::RandomModelAndBatch(rng);
    TaggerModel b = a.model, sum = a.model;
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (size_t p = 0; p < b.num_parameters(); ++p) {
      b.parameter(p) = u(rng);
      sum.parameter(p) = a.model.parameter(p) + b.parameter(p);
    }
    for (const auto& s : a.batch) {
      Lattice la = ScoreLattice(a.model, s.tokens), lb = ScoreLattice(b, s.tokens),
              ls = ScoreLattice(sum, s.tokens);
      for (int j = 0; j < la.length(); ++j) {
        for (int y = 0; y < la.num_labels(); ++y) {
          REQUIRE(std::abs(ls.unary(j, y) - la.unary(j, y) - lb.unary(j, y)) < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("zero weights on one token with two labels give -ln 2") {
  TagScheme two(SchemeKind::kFlatPos, {"NOUN", "V"});
  TaggerModel m(two, ParseTemplates("w0"));
  std::vector<LabeledSentence> batch = {Sent({"x"}, {"V"})};
  GrowDictionary(m, Dataset(two, batch, Role::kLabeled));
  auto og = LogLikelihoodAndGradient(m, batch, 0.5);
  CHECK(og.objective == doctest::Approx(-std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("gradient matches central finite differences") {
  std::mt19937_64 rng(2026);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    auto mb = testing::RandomModelAndBatch(rng);
    auto r = testing::CheckGradient(mb.model, mb.batch, mb.l2, 1e-5);
    worst = std::max(worst, r.max_relative_error);
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("regularizer enters the gradient as -l2 w") {
  std::mt19937_64 rng(4);
  auto mb = testing::RandomModelAndBatch(rng);
  auto g0 = LogLikelihoodAndGradient(mb.model, mb.batch, 0.0).gradient;
  auto g1 = LogLikelihoodAndGradient(mb.model, mb.batch, 0.3).gradient;
  for (size_t p = 0; p < g0.size(); ++p) {
    CHECK(std::abs(g1[p] - (g0[p] - 0.3 * mb.model.parameter(p))) < 1e-12);
  }
}

TEST_CASE("gradient vanishes at the optimum of a one-sentence corpus") {
  Dataset one(Per(), {Sent({"Ali", "went"}, {"B-PER", "O"})}, Role::kLabeled);
  TrainConfig c;
  c.epochs = 3000;
  c.learning_rate = 0.5;
  c.l2 = 0.1;
  c.batch_size = 1;
  TrainResult r = Train(one, Dataset(Per(), {}, Role::kDev), c, ParseTemplates("w0,bigram"));
  auto og = LogLikelihoodAndGradient(r.model, one.sentences(), 0.0);
  for (size_t p = 0; p < og.gradient.size(); ++p) {
    CHECK(std::abs(og.gradient[p] - 0.1 * r.model.parameter(p)) < 1e-3);
  }
}

TEST_CASE("unlabeled sentences are rejected in a batch") {
  TaggerModel m(Per(), DefaultTemplates());
  std::vector<LabeledSentence> batch = {Sent({"x"}, {})};
  try {
    LogLikelihoodAndGradient(m, batch, 0.0);
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnlabeledSentenceInBatch);
  }
}

TEST_CASE("a separable corpus is learned within ten epochs") {
  Dataset train = Separable(20, 1);
  Dataset dev = Separable(20, 2).WithRole(Role::kDev);
  TrainConfig c;
  c.epochs = 10;
  TrainResult r = Train(train, dev, c);
  LabelSequences pred = PredictLabels(r.model, dev);
  CHECK(TokenAccuracy(GoldLabels(dev), pred) == 1.0);
}

TEST_CASE("zero epochs return the initial model") {
  TaggerModel init(Per(), DefaultTemplates());
  init.AddFeature("w0=seed");
  init.weight(0, 1) = 0.25;
  TrainConfig c;
  c.epochs = 0;
  TrainResult r = Train(init, Separable(5, 1), Dataset(Per(), {}, Role::kDev), c);
  CHECK(r.model == init);
  CHECK(r.history.empty());
}

TEST_CASE("training is deterministic given the seed") {
  Dataset train = Separable(30, 3);
  Dataset dev = Separable(10, 4).WithRole(Role::kDev);
  TrainConfig c;
  c.seed = 9;
  auto a = Train(train, dev, c), b = Train(train, dev, c);
  CHECK(a.model.Parameters() == b.model.Parameters());
  c.seed = 10;
  auto d = Train(train, Dataset(Per(), {}, Role::kDev), c);
  auto e = Train(train, Dataset(Per(), {}, Role::kDev), TrainConfig{});
  CHECK(d.model.Parameters() != e.model.Parameters());
}

TEST_CASE("full-batch objective does not decrease with a small step") {
  Dataset train = Separable(20, 5);
  TrainConfig c;
  c.epochs = 30;
  c.learning_rate = 0.01;
  c.batch_size = 20;
  TrainResult r = Train(train, Dataset(Per(), {}, Role::kDev), c);
  for (size_t i = 1; i < r.history.size(); ++i) {
    CHECK(r.history[i].objective >= r.history[i - 1].objective);
  }
}

TEST_CASE("early stopping honors patience and keeps the best epoch") {
  Dataset train = Separable(20, 1);
  Dataset dev = Separable(20, 2).WithRole(Role::kDev);
  TrainConfig c;
  c.epochs = 50;
  c.patience = 2;
  TrainResult r = Train(train, dev, c);
  CHECK(r.history.size() < 50);
  CHECK(r.best_epoch >= 1);
  CHECK(EvaluateTaskMetric(r.model, dev) == r.history[r.best_epoch - 1].dev_metric);
}

TEST_CASE("empty training set") {
  TrainConfig c;
  CHECK_THROWS_AS(Train(Dataset(Per(), {}, Role::kLabeled), Dataset(Per(), {}, Role::kDev), c),
                  Error);
}

TEST_CASE("single-token softmax confidence") {
  TagScheme two(SchemeKind::kFlatPos, {"NOUN", "V"});
  TaggerModel m(two, ParseTemplates("w0"));
  const int f = m.AddFeature("w0=x");
  m.weight(f, 0) = std::log(0.9);
  m.weight(f, 1) = std::log(0.1);
  std::vector<std::string> s = {"x"};
  Prediction p = PredictWithConfidence(m, s);
  CHECK(p.label_ids == std::vector<int>{0});
  CHECK(p.confidences[0] == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(p.min_confidence == p.confidences[0]);
}

TEST_CASE("uniform lattice over four labels gives confidence 0.25") {
  TagScheme four(SchemeKind::kFlatPos, {"A", "B", "C", "D"});
  TaggerModel m(four, DefaultTemplates());
  std::vector<std::string> s = {"p", "q", "r"};
  Prediction p = PredictWithConfidence(m, s);
  for (double c : p.confidences) CHECK(c == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("confidences lie in [0, 1] and the minimum is attached") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    auto mb = testing::RandomModelAndBatch(rng);
    for (const auto& s : mb.batch) {
      Prediction p = PredictWithConfidence(mb.model, s.tokens);
      REQUIRE(p.size() == s.size());
      REQUIRE(p.confidences.size() == s.size());
      double lo = 1.0;
      for (double c : p.confidences) {
        REQUIRE(c >= 0.0);
        REQUIRE(c <= 1.0);
        lo = std::min(lo, c);
      }
      REQUIRE(p.min_confidence == lo);
    }
  }
}

TEST_CASE("model save and load are lossless") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    auto mb = testing::RandomModelAndBatch(rng);
    TrainConfig c;
    c.seed = rng();
    c.l2 = std::ldexp(static_cast<double>(rng() % 1000), -13);
    mb.model.set_train_config(c);
    // Extreme but finite values.
    mb.model.parameter(0) = 1e-300;
    if (mb.model.num_parameters() > 1) mb.model.parameter(1) = -1.7976931348623157e308;
    const std::string text = mb.model.Serialize();
    TaggerModel back = TaggerModel::Deserialize(text);
    REQUIRE(back == mb.model);
    REQUIRE(back.Serialize() == text);
  }
  TaggerModel pos(TagScheme::ArabicPos(), DefaultTemplates());
  pos.AddFeature("w0=يا");
  CHECK(TaggerModel::Deserialize(pos.Serialize()) == pos);
}

TEST_CASE("malformed model files are rejected") {
  TaggerModel m(Per(), ParseTemplates("w0"));
  m.AddFeature("w0=a");
  const std::string good = m.Serialize();
  for (std::string bad :
       {std::string(""), std::string("selftag-model\t2\n"),
        good.substr(0, good.size() - 4),
        [&] {
          std::string s = good;
          s.replace(s.find("w0=a\t") + 5, 1, "z");
          return s;
        }()}) {
    try {
      TaggerModel::Deserialize(bad);
      FAIL("expected a throw");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kModelFormat);
    }
  }
}

}  // namespace
}  // namespace selftag
