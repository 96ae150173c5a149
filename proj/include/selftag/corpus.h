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

// Token-labeled corpora in a two-column CoNLL-style format: parsing, writing,
// BIO span extraction, seeded splitting and gold-fraction mixing.

#ifndef SELFTAG_CORPUS_H_
#define SELFTAG_CORPUS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace selftag {

enum class SchemeKind { kBioEntity, kFlatPos };

std::string_view SchemeKindName(SchemeKind kind);  // "bio" or "pos"
SchemeKind ParseSchemeKind(std::string_view name);

// An ordered label vocabulary. Label indices are positions in labels().
class TagScheme {
 public:
  // Validates the vocabulary against the kind's rules; throws kInvalidScheme.
  TagScheme(SchemeKind kind, std::vector<std::string> labels);

  // "O" followed by B-X, I-X for every entity type, in the given order.
  static TagScheme Bio(std::span<const std::string> entity_types);
  // The 21-tag dialectal Arabic tweet POS tag set.
  static TagScheme ArabicPos();

  SchemeKind kind() const { return kind_; }
  const std::vector<std::string>& labels() const { return labels_; }
  int size() const { return static_cast<int>(labels_.size()); }
  const std::string& label(int index) const { return labels_[index]; }
  std::optional<int> IndexOf(std::string_view label) const;
  bool Contains(std::string_view label) const {
    return IndexOf(label).has_value();
  }

  // Entity types in order of first B-/I- appearance. Empty for flat-POS.
  std::vector<std::string> EntityTypes() const;

  bool operator==(const TagScheme& other) const = default;

 private:
  SchemeKind kind_;
  std::vector<std::string> labels_;
};

struct Provenance {
  enum class Kind { kGold, kPseudo };

  Kind kind = Kind::kGold;
  int iteration = 0;           // pseudo only
  double min_confidence = 0.0;  // pseudo only

  static Provenance Gold() { return {}; }
  static Provenance Pseudo(int iteration, double min_confidence) {
    return {Kind::kPseudo, iteration, min_confidence};
  }
  bool is_pseudo() const { return kind == Kind::kPseudo; }
  bool operator==(const Provenance& other) const = default;
};

struct LabeledSentence {
  std::vector<std::string> tokens;
  std::vector<std::string> labels;  // empty for unlabeled sentences
  Provenance provenance;

  bool labeled() const { return !labels.empty(); }
  size_t size() const { return tokens.size(); }
  bool operator==(const LabeledSentence& other) const = default;
};

enum class Role { kLabeled, kUnlabeled, kDev, kTest };

std::string_view RoleName(Role role);

// Immutable, validated collection of sentences. Construction enforces every
// label/scheme invariant, so any Dataset in hand is well formed.
class Dataset {
 public:
  Dataset(TagScheme scheme, std::vector<LabeledSentence> sentences, Role role);

  const TagScheme& scheme() const { return scheme_; }
  const std::vector<LabeledSentence>& sentences() const { return sentences_; }
  Role role() const { return role_; }
  size_t size() const { return sentences_.size(); }
  bool empty() const { return sentences_.empty(); }
  const LabeledSentence& operator[](size_t i) const { return sentences_[i]; }

  size_t TokenCount() const;
  Dataset WithRole(Role role) const;
  // Copy with every label removed; role becomes kUnlabeled.
  Dataset StripLabels() const;

  bool operator==(const Dataset& other) const = default;

 private:
  TagScheme scheme_;
  std::vector<LabeledSentence> sentences_;
  Role role_;
};

struct Span {
  std::string entity_type;
  int start = 0;  // inclusive
  int end = 0;    // exclusive

  auto operator<=>(const Span& other) const = default;
};

enum class BioMode {
  kStrict,  // I-X not preceded by B-X/I-X is an error
  kRepair,  // such an I-X is rewritten to B-X
};

// Throws kInvalidBioTransition or kUnknownLabel (for malformed BIO labels)
// on the first offending position.
void ValidateBio(std::span<const std::string> labels);

// Rewrites every I-X that does not continue an X entity into B-X. The result
// is always valid strict BIO, and its spans equal the lenient chunking that
// seqeval applies by default.
std::vector<std::string> RepairBio(std::span<const std::string> labels);

// Blocks separated by blank lines, one "token<TAB>label" or "token" per line.
// Lines starting with '#' are skipped. When `role` is absent it is inferred:
// kLabeled if the sentences carry labels, kUnlabeled otherwise.
Dataset ParseConll(std::string_view text, const TagScheme& scheme,
                   std::optional<Role> role = std::nullopt,
                   BioMode mode = BioMode::kStrict);

// Builds a scheme from the labels present in `text`. BIO entity types and POS
// tags are sorted lexicographically.
TagScheme InferScheme(std::string_view text, SchemeKind kind);

std::string WriteConll(const Dataset& ds);

// Maximal B-X (I-X)* runs, in order of start position.
std::vector<Span> ExtractSpans(std::span<const std::string> labels);

// Seeded partition with floor-allocated part sizes; leftover sentences go to
// the last part. Each part keeps the source's relative sentence order.
std::vector<Dataset> SplitDataset(const Dataset& ds,
                                  std::span<const double> ratios,
                                  uint64_t seed);

// source_L followed by round(fraction * |target_gold|) seeded draws from
// target_gold (without replacement, in target_gold order). Role kLabeled.
Dataset MixGoldFraction(const Dataset& source_labeled,
                        const Dataset& target_gold, double fraction,
                        uint64_t seed);

// Keeps sentences whose externally supplied probability exceeds `threshold`
// and splits them 30/70 into (dev, test).
std::pair<Dataset, Dataset> FilterAndSplitByProbability(
    const Dataset& ds, std::span<const double> probabilities, double threshold,
    uint64_t seed);

// Concatenation of two datasets with the same scheme.
Dataset Concat(const Dataset& a, const Dataset& b, Role role);

}  // namespace selftag

#endif  // SELFTAG_CORPUS_H_
