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

#include "selftag/synthetic.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <string>
#include <unordered_set>

#include "selftag/error.h"
#include "selftag/random.h"

namespace selftag {
namespace {

enum Category {
  kFunc, kConj, kDet, kVerb, kNoun, kAdj,
  kPerTrigger, kLocTrigger, kOrgTrigger,
  kPerName, kLocName, kOrgName,
  kNumCategories
};

struct CategoryInfo {
  double share;
  const char* entity;  // nullptr for O words
  const char* pos;
};

constexpr std::array<CategoryInfo, kNumCategories> kCategories = {{
    {0.06, nullptr, "PREP"},
    {0.02, nullptr, "CONJ"},
    {0.02, nullptr, "DET"},
    {0.16, nullptr, "V"},
    {0.22, nullptr, "NOUN"},
    {0.10, nullptr, "ADJ"},
    {0.03, nullptr, "NOUN"},
    {0.02, nullptr, "PREP"},
    {0.03, nullptr, "NOUN"},
    {0.14, "PER", "NOUN"},
    {0.11, "LOC", "NOUN"},
    {0.09, "ORG", "NOUN"},
}};

// One slot of a clause: a category and how many tokens it spans.
struct Slot {
  Category category;
  int min_len = 1;
  int max_len = 1;
};

struct Clause {
  double weight;
  std::vector<Slot> slots;
};

const std::vector<Clause>& Clauses() {
  static const std::vector<Clause> clauses = {
      {0.20, {{kPerTrigger}, {kPerName, 1, 2}, {kVerb}, {kNoun}}},
      {0.18, {{kVerb}, {kLocTrigger}, {kLocName, 1, 2}}},
      {0.12, {{kOrgTrigger}, {kOrgName, 1, 3}, {kVerb}, {kAdj}, {kNoun}}},
      {0.20, {{kDet}, {kNoun}, {kAdj}, {kVerb}}},
      {0.12, {{kPerName, 1, 2}, {kVerb}, {kFunc}, {kNoun}}},
      {0.10, {{kNoun}, {kFunc}, {kLocName}}},
      {0.08, {{kOrgName, 1, 2}, {kVerb}, {kDet}, {kNoun}}},
  };
  return clauses;
}

class WordFactory {
 public:
  explicit WordFactory(uint64_t seed) : rng_(seed) {}

  std::string Fresh() {
    static constexpr std::string_view kConsonants = "bdfghklmnprstvz";
    static constexpr std::string_view kVowels = "aeiou";
    while (true) {
      std::string w;
      const int syllables = 2 + static_cast<int>(rng_.Uniform(2));
      for (int i = 0; i < syllables; ++i) {
        w += kConsonants[rng_.Uniform(kConsonants.size())];
        w += kVowels[rng_.Uniform(kVowels.size())];
      }
      if (rng_.Bernoulli(0.5)) w += kConsonants[rng_.Uniform(kConsonants.size())];
      if (used_.insert(w).second) return w;
    }
  }

 private:
  Rng rng_;
  std::unordered_set<std::string> used_;
};

struct Lexicon {
  // Per category, per rank: the source and target surface forms.
  std::array<std::vector<std::string>, kNumCategories> source;
  std::array<std::vector<std::string>, kNumCategories> target;
  std::array<std::vector<double>, kNumCategories> cumulative;  // Zipf CDF
};

Lexicon BuildLexicon(const SyntheticShiftSpec& spec) {
  WordFactory words(MixSeed(spec.seed, 1));
  Rng shift_rng(MixSeed(spec.seed, 2));
  Lexicon lex;
  for (int c = 0; c < kNumCategories; ++c) {
    const int n = std::max(
        2, static_cast<int>(std::lround(kCategories[c].share * spec.lexicon_size)));
    double total = 0.0;
    for (int r = 0; r < n; ++r) {
      lex.source[c].push_back(words.Fresh());
      total += 1.0 / (r + 1);
      lex.cumulative[c].push_back(total);
    }
    for (double& x : lex.cumulative[c]) x /= total;
  }
  for (int c = 0; c < kNumCategories; ++c) {
    for (const auto& w : lex.source[c]) {
      lex.target[c].push_back(shift_rng.Bernoulli(spec.shift_rate) ? words.Fresh()
                                                                    : w);
    }
  }
  return lex;
}

class SentenceSampler {
 public:
  SentenceSampler(const Lexicon& lex, bool target, SchemeKind scheme)
      : lex_(lex), target_(target), scheme_(scheme) {}

  LabeledSentence Sample(Rng& rng) const {
    LabeledSentence s;
    const int clauses = 1 + static_cast<int>(rng.Uniform(3));
    for (int k = 0; k < clauses; ++k) {
      if (k > 0) Emit(s, kConj, false, rng);
      const Clause& clause = PickClause(rng);
      for (const Slot& slot : clause.slots) {
        const int len = slot.min_len +
                        static_cast<int>(rng.Uniform(slot.max_len - slot.min_len + 1));
        for (int i = 0; i < len; ++i) Emit(s, slot.category, i > 0, rng);
      }
    }
    return s;
  }

 private:
  static const Clause& PickClause(Rng& rng) {
    double u = rng.UniformReal();
    for (const auto& clause : Clauses()) {
      if (u < clause.weight) return clause;
      u -= clause.weight;
    }
    return Clauses().back();
  }

  void Emit(LabeledSentence& s, Category c, bool inside, Rng& rng) const {
    const auto& cdf = lex_.cumulative[c];
    const double u = rng.UniformReal();
    size_t rank = std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
    rank = std::min(rank, cdf.size() - 1);
    s.tokens.push_back(target_ ? lex_.target[c][rank] : lex_.source[c][rank]);
    if (scheme_ == SchemeKind::kFlatPos) {
      s.labels.emplace_back(kCategories[c].pos);
    } else if (kCategories[c].entity == nullptr) {
      s.labels.emplace_back("O");
    } else {
      s.labels.push_back(std::string(inside ? "I-" : "B-") + kCategories[c].entity);
    }
  }

  const Lexicon& lex_;
  bool target_;
  SchemeKind scheme_;
};

void AddLabelNoise(LabeledSentence& s, SchemeKind scheme, double rate, Rng& rng) {
  if (rate <= 0.0) return;
  if (scheme == SchemeKind::kFlatPos) {
    static const std::array<const char*, 6> kTags = {"PREP", "CONJ", "DET",
                                                     "V", "NOUN", "ADJ"};
    for (auto& label : s.labels) {
      if (rng.Bernoulli(rate)) label = kTags[rng.Uniform(kTags.size())];
    }
    return;
  }
  static const std::array<const char*, 3> kTypes = {"PER", "LOC", "ORG"};
  for (size_t j = 0; j < s.labels.size(); ++j) {
    if (s.labels[j][0] != 'B' || !rng.Bernoulli(rate)) continue;
    const std::string type = kTypes[rng.Uniform(kTypes.size())];
    s.labels[j] = "B-" + type;
    for (size_t k = j + 1; k < s.labels.size() && s.labels[k][0] == 'I'; ++k) {
      s.labels[k] = "I-" + type;
    }
  }
}

Dataset SampleDataset(const SentenceSampler& sampler, const TagScheme& scheme,
                      int count, Role role, uint64_t seed, double noise = 0.0) {
  Rng rng(seed);
  std::vector<LabeledSentence> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    LabeledSentence s = sampler.Sample(rng);
    AddLabelNoise(s, scheme.kind(), noise, rng);
    if (role == Role::kUnlabeled) s.labels.clear();
    out.push_back(std::move(s));
  }
  return Dataset(scheme, std::move(out), role);
}

}  // namespace

void SyntheticShiftSpec::Validate() const {
  if (!(shift_rate >= 0.0 && shift_rate <= 1.0) ||
      !(label_noise >= 0.0 && label_noise <= 1.0)) {
    throw Error(ErrorCode::kSpecInvalid, "rates must lie in [0, 1]");
  }
  if (lexicon_size < 1 || labeled < 1 || unlabeled < 1 || dev < 1 || test < 1 ||
      gold < 1) {
    throw Error(ErrorCode::kSpecInvalid, "sizes and counts must be >= 1");
  }
}

TagScheme SyntheticScheme(SchemeKind kind) {
  if (kind == SchemeKind::kFlatPos) return TagScheme::ArabicPos();
  const std::vector<std::string> types = {"PER", "LOC", "ORG"};
  return TagScheme::Bio(types);
}

SyntheticCorpus GenerateSyntheticShift(const SyntheticShiftSpec& spec) {
  spec.Validate();
  const Lexicon lex = BuildLexicon(spec);
  const TagScheme scheme = SyntheticScheme(spec.scheme);
  const SentenceSampler source(lex, false, spec.scheme);
  const SentenceSampler target(lex, true, spec.scheme);
  auto stream = [&](uint64_t k) { return MixSeed(spec.seed, 100 + k); };

  SyntheticCorpus c{
      SampleDataset(source, scheme, spec.labeled, Role::kLabeled, stream(0),
                    spec.label_noise),
      SampleDataset(source, scheme, spec.dev, Role::kDev, stream(1)),
      SampleDataset(source, scheme, spec.test, Role::kTest, stream(2)),
      SampleDataset(source, scheme, spec.unlabeled, Role::kUnlabeled, stream(3)),
      SampleDataset(target, scheme, spec.unlabeled, Role::kUnlabeled, stream(4)),
      SampleDataset(target, scheme, spec.dev, Role::kDev, stream(5)),
      SampleDataset(target, scheme, spec.test, Role::kTest, stream(6)),
      SampleDataset(target, scheme, spec.gold, Role::kLabeled, stream(7)),
  };
  std::set<std::string> src, tgt;
  for (int k = 0; k < kNumCategories; ++k) {
    src.insert(lex.source[k].begin(), lex.source[k].end());
    tgt.insert(lex.target[k].begin(), lex.target[k].end());
  }
  c.source_vocabulary = src.size();
  c.target_vocabulary = tgt.size();
  for (const auto& w : tgt) c.shared_vocabulary += src.count(w);
  return c;
}

}  // namespace selftag
