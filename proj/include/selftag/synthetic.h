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

// Synthetic source/target corpora that differ only in surface word forms.
//
// A clause grammar emits sentences over twelve word categories (function
// words, verbs, nouns, adjectives, per-type trigger words and PER/LOC/ORG
// names). Each category owns a share of a pseudo-word lexicon sampled with
// Zipfian frequencies. The target domain rewrites a `shift_rate` fraction of
// the lexicon's word types to unseen target-only forms; label structure and
// frequencies are unchanged.

#ifndef SELFTAG_SYNTHETIC_H_
#define SELFTAG_SYNTHETIC_H_

#include <cstdint>

#include "selftag/corpus.h"

namespace selftag {

struct SyntheticShiftSpec {
  SchemeKind scheme = SchemeKind::kBioEntity;
  int lexicon_size = 600;  // source word types
  double shift_rate = 0.5;
  int labeled = 400;    // source training sentences
  int unlabeled = 400;  // target pool (and the equal-size source pool)
  int dev = 200;        // per domain
  int test = 500;       // per domain
  int gold = 200;       // labeled target sentences for few-shot mixing
  // Source training labels only: probability of relabeling an entity span to
  // another type (BIO) or a token to another tag (POS).
  double label_noise = 0.02;
  uint64_t seed = 0;

  void Validate() const;  // throws kSpecInvalid
};

struct SyntheticCorpus {
  Dataset labeled;           // source, role L
  Dataset source_dev;
  Dataset source_test;
  Dataset source_unlabeled;  // source pool, |unlabeled| sentences
  Dataset unlabeled;         // target pool, labels stripped
  Dataset target_dev;
  Dataset target_test;
  Dataset target_gold;       // role L
  size_t source_vocabulary = 0;
  size_t target_vocabulary = 0;
  size_t shared_vocabulary = 0;
};

// The tag scheme synthetic corpora use: BIO over {PER, LOC, ORG} or the
// 21-tag Arabic POS set.
TagScheme SyntheticScheme(SchemeKind kind);

// Deterministic in spec (including seed).
SyntheticCorpus GenerateSyntheticShift(const SyntheticShiftSpec& spec);

}  // namespace selftag

#endif  // SELFTAG_SYNTHETIC_H_
