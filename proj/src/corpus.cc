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

#include "selftag/corpus.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "selftag/error.h"
#include "selftag/random.h"

namespace selftag {
namespace {

bool StartsWith(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

bool IsBioPrefixed(std::string_view label) {
  return (StartsWith(label, "B-") || StartsWith(label, "I-")) &&
         label.size() > 2;
}

std::string_view EntityTypeOf(std::string_view label) {
  return label.substr(2);
}

std::vector<std::string_view> SplitLines(std::string_view text) {
  std::vector<std::string_view> lines;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      if (pos < text.size()) lines.push_back(text.substr(pos));
      break;
    }
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  for (auto& line : lines) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  }
  return lines;
}

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> cols;
  size_t pos = 0;
  while (true) {
    size_t tab = line.find('\t', pos);
    if (tab == std::string_view::npos) {
      cols.push_back(line.substr(pos));
      break;
    }
    cols.push_back(line.substr(pos, tab - pos));
    pos = tab + 1;
  }
  return cols;
}

// Raw blocks of (token, optional label) columns with their first line number.
struct RawSentence {
  std::vector<std::vector<std::string_view>> rows;
  size_t first_line = 0;
};

std::vector<RawSentence> ReadBlocks(std::string_view text) {
  std::vector<RawSentence> blocks;
  RawSentence current;
  size_t line_no = 0;
  for (std::string_view line : SplitLines(text)) {
    ++line_no;
    if (!line.empty() && line.front() == '#') continue;
    if (line.find_first_not_of(" \t") == std::string_view::npos) {
      if (!current.rows.empty()) blocks.push_back(std::move(current));
      current = RawSentence{};
      continue;
    }
    auto cols = SplitTabs(line);
    if (cols.size() > 2 || cols[0].empty() ||
        (cols.size() == 2 && cols[1].empty())) {
      throw Error(ErrorCode::kMalformedLine,
                  "line " + std::to_string(line_no) + ": expected token or "
                  "token<TAB>label, got '" + std::string(line) + "'");
    }
    if (current.rows.empty()) current.first_line = line_no;
    if (!current.rows.empty() && current.rows.front().size() != cols.size()) {
      throw Error(ErrorCode::kMalformedLine,
                  "line " + std::to_string(line_no) +
                      ": column count differs within sentence");
    }
    current.rows.push_back(std::move(cols));
  }
  if (!current.rows.empty()) blocks.push_back(std::move(current));
  return blocks;
}

}  // namespace

std::string_view SchemeKindName(SchemeKind kind) {
  return kind == SchemeKind::kBioEntity ? "bio" : "pos";
}

SchemeKind ParseSchemeKind(std::string_view name) {
  if (name == "bio") return SchemeKind::kBioEntity;
  if (name == "pos") return SchemeKind::kFlatPos;
  throw Error(ErrorCode::kInvalidScheme,
              "unknown scheme kind '" + std::string(name) + "'");
}

std::string_view RoleName(Role role) {
  switch (role) {
    case Role::kLabeled:
      return "L";
    case Role::kUnlabeled:
      return "U";
    case Role::kDev:
      return "dev";
    case Role::kTest:
      return "test";
  }
  return "?";
}

TagScheme::TagScheme(SchemeKind kind, std::vector<std::string> labels)
    : kind_(kind), labels_(std::move(labels)) {
  if (labels_.empty()) {
    throw Error(ErrorCode::kInvalidScheme, "empty label vocabulary");
  }
  std::set<std::string_view> seen;
  for (const auto& label : labels_) {
    if (label.empty() || !seen.insert(label).second) {
      throw Error(ErrorCode::kInvalidScheme,
                  "empty or duplicate label '" + label + "'");
    }
    if (kind_ == SchemeKind::kBioEntity && label != "O" &&
        !IsBioPrefixed(label)) {
      throw Error(ErrorCode::kInvalidScheme,
                  "BIO vocabulary label '" + label + "' is not O, B-X or I-X");
    }
    if (kind_ == SchemeKind::kFlatPos &&
        (StartsWith(label, "B-") || StartsWith(label, "I-"))) {
      throw Error(ErrorCode::kInvalidScheme,
                  "POS vocabulary label '" + label + "' has a BIO prefix");
    }
  }
  if (kind_ == SchemeKind::kBioEntity && !seen.contains("O")) {
    throw Error(ErrorCode::kInvalidScheme, "BIO vocabulary lacks \"O\"");
  }
}

TagScheme TagScheme::Bio(std::span<const std::string> entity_types) {
  std::vector<std::string> labels = {"O"};
  for (const auto& type : entity_types) {
    labels.push_back("B-" + type);
    labels.push_back("I-" + type);
  }
  return TagScheme(SchemeKind::kBioEntity, std::move(labels));
}

TagScheme TagScheme::ArabicPos() {
  return TagScheme(SchemeKind::kFlatPos,
                   {"ADV", "ADJ", "CONJ", "DET", "NOUN", "NSUFF", "NUM",
                    "PART", "PUNC", "PRON", "PREP", "V", "ABBREV", "VSUFF",
                    "FOREIGN", "FUT_PART", "PROG_PART", "EMOT", "MENTION",
                    "HASH", "URL"});
}

std::optional<int> TagScheme::IndexOf(std::string_view label) const {
  for (size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return static_cast<int>(i);
  }
  return std::nullopt;
}

std::vector<std::string> TagScheme::EntityTypes() const {
  std::vector<std::string> types;
  if (kind_ != SchemeKind::kBioEntity) return types;
  for (const auto& label : labels_) {
    if (label == "O") continue;
    std::string type(EntityTypeOf(label));
    if (std::find(types.begin(), types.end(), type) == types.end()) {
      types.push_back(std::move(type));
    }
  }
  return types;
}

void ValidateBio(std::span<const std::string> labels) {
  std::string_view prev_type;  // empty when previous label is O or at start
  for (size_t i = 0; i < labels.size(); ++i) {
    const std::string& label = labels[i];
    if (label == "O") {
      prev_type = {};
      continue;
    }
    if (!IsBioPrefixed(label)) {
      throw Error(ErrorCode::kUnknownLabel,
                  "'" + label + "' is not a BIO label");
    }
    std::string_view type = EntityTypeOf(label);
    if (label[0] == 'I' && type != prev_type) {
      throw Error(ErrorCode::kInvalidBioTransition,
                  "'" + label + "' at position " + std::to_string(i) +
                      " does not continue a " + std::string(type) + " entity");
    }
    prev_type = type;
  }
}

std::vector<std::string> RepairBio(std::span<const std::string> labels) {
  std::vector<std::string> out(labels.begin(), labels.end());
  std::string_view prev_type;
  for (auto& label : out) {
    if (!IsBioPrefixed(label)) {
      prev_type = {};
      continue;
    }
    if (label[0] == 'I' && EntityTypeOf(label) != prev_type) label[0] = 'B';
    prev_type = EntityTypeOf(label);
  }
  return out;
}

Dataset::Dataset(TagScheme scheme, std::vector<LabeledSentence> sentences,
                 Role role)
    : scheme_(std::move(scheme)), sentences_(std::move(sentences)),
      role_(role) {
  for (size_t i = 0; i < sentences_.size(); ++i) {
    const auto& s = sentences_[i];
    const std::string where = "sentence " + std::to_string(i);
    if (s.tokens.empty()) {
      throw Error(ErrorCode::kMalformedLine, where + " has no tokens");
    }
    if (role_ == Role::kUnlabeled && s.labeled()) {
      throw Error(ErrorCode::kMalformedLine,
                  where + " carries labels in an unlabeled dataset");
    }
    if (role_ == Role::kLabeled && !s.labeled()) {
      throw Error(ErrorCode::kUnlabeledSentenceInBatch,
                  where + " is unlabeled in a labeled dataset");
    }
    if (!s.labeled()) continue;
    if (s.labels.size() != s.tokens.size()) {
      throw Error(ErrorCode::kMalformedLine,
                  where + ": label count differs from token count");
    }
    for (const auto& label : s.labels) {
      if (!scheme_.Contains(label)) {
        throw Error(ErrorCode::kUnknownLabel,
                    where + ": label '" + label + "' not in scheme");
      }
    }
    if (scheme_.kind() == SchemeKind::kBioEntity) ValidateBio(s.labels);
  }
}

size_t Dataset::TokenCount() const {
  size_t n = 0;
  for (const auto& s : sentences_) n += s.size();
  return n;
}

Dataset Dataset::WithRole(Role role) const {
  return Dataset(scheme_, sentences_, role);
}

Dataset Dataset::StripLabels() const {
  std::vector<LabeledSentence> out;
  out.reserve(sentences_.size());
  for (const auto& s : sentences_) out.push_back({s.tokens, {}, Provenance::Gold()});
  return Dataset(scheme_, std::move(out), Role::kUnlabeled);
}

Dataset ParseConll(std::string_view text, const TagScheme& scheme,
                   std::optional<Role> role, BioMode mode) {
  auto blocks = ReadBlocks(text);
  if (blocks.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "no sentences in input");
  }
  const bool labeled = blocks.front().rows.front().size() == 2;
  std::vector<LabeledSentence> sentences;
  sentences.reserve(blocks.size());
  for (const auto& block : blocks) {
    const std::string where = "sentence at line " +
                              std::to_string(block.first_line);
    if ((block.rows.front().size() == 2) != labeled) {
      throw Error(ErrorCode::kMalformedLine,
                  where + ": mixes labeled and unlabeled sentences");
    }
    LabeledSentence s;
    for (const auto& row : block.rows) {
      s.tokens.emplace_back(row[0]);
      if (labeled) {
        if (!scheme.Contains(row[1])) {
          throw Error(ErrorCode::kUnknownLabel,
                      where + ": label '" + std::string(row[1]) +
                          "' not in scheme");
        }
        s.labels.emplace_back(row[1]);
      }
    }
    if (labeled && scheme.kind() == SchemeKind::kBioEntity) {
      if (mode == BioMode::kRepair) {
        s.labels = RepairBio(s.labels);
      } else {
        try {
          ValidateBio(s.labels);
        } catch (const Error& e) {
          throw Error(e.code(), where + ": " + e.what());
        }
      }
    }
    sentences.push_back(std::move(s));
  }
  Role actual = role.value_or(labeled ? Role::kLabeled : Role::kUnlabeled);
  return Dataset(scheme, std::move(sentences), actual);
}

TagScheme InferScheme(std::string_view text, SchemeKind kind) {
  std::set<std::string> labels;
  for (const auto& block : ReadBlocks(text)) {
    for (const auto& row : block.rows) {
      if (row.size() == 2) labels.emplace(row[1]);
    }
  }
  if (kind == SchemeKind::kFlatPos) {
    if (labels.empty()) {
      throw Error(ErrorCode::kEmptyCorpus, "no labels to infer a scheme from");
    }
    return TagScheme(kind, {labels.begin(), labels.end()});
  }
  std::set<std::string> types;
  for (const auto& label : labels) {
    if (label == "O") continue;
    if (!IsBioPrefixed(label)) {
      throw Error(ErrorCode::kUnknownLabel,
                  "'" + label + "' is not a BIO label");
    }
    types.emplace(EntityTypeOf(label));
  }
  std::vector<std::string> ordered(types.begin(), types.end());
  return TagScheme::Bio(ordered);
}

std::string WriteConll(const Dataset& ds) {
  std::string out;
  for (size_t i = 0; i < ds.size(); ++i) {
    if (i > 0) out += '\n';
    const auto& s = ds[i];
    for (size_t j = 0; j < s.tokens.size(); ++j) {
      out += s.tokens[j];
      if (s.labeled()) {
        out += '\t';
        out += s.labels[j];
      }
      out += '\n';
    }
  }
  return out;
}

std::vector<Span> ExtractSpans(std::span<const std::string> labels) {
  for (const auto& label : labels) {
    if (label != "O" && !IsBioPrefixed(label)) {
      throw Error(ErrorCode::kNotBioScheme,
                  "'" + label + "' is not a BIO label");
    }
  }
  ValidateBio(labels);
  std::vector<Span> spans;
  const int n = static_cast<int>(labels.size());
  int j = 0;
  while (j < n) {
    if (labels[j][0] != 'B') {
      ++j;
      continue;
    }
    std::string_view type = EntityTypeOf(labels[j]);
    int end = j + 1;
    while (end < n && labels[end][0] == 'I' &&
           EntityTypeOf(labels[end]) == type) {
      ++end;
    }
    spans.push_back({std::string(type), j, end});
    j = end;
  }
  return spans;
}

std::vector<Dataset> SplitDataset(const Dataset& ds,
                                  std::span<const double> ratios,
                                  uint64_t seed) {
  if (ratios.empty()) {
    throw Error(ErrorCode::kRatioSumInvalid, "no ratios given");
  }
  double sum = 0.0;
  for (double r : ratios) {
    if (!(r > 0.0)) {
      throw Error(ErrorCode::kRatioSumInvalid, "ratios must be positive");
    }
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error(ErrorCode::kRatioSumInvalid,
                "ratios sum to " + std::to_string(sum) + ", expected 1");
  }
  const size_t n = ds.size();
  if (n < ratios.size()) {
    throw Error(ErrorCode::kTooFewSentences,
                std::to_string(n) + " sentences for " +
                    std::to_string(ratios.size()) + " parts");
  }
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  Rng rng(seed);
  rng.Shuffle(order);

  std::vector<Dataset> parts;
  size_t offset = 0;
  for (size_t p = 0; p < ratios.size(); ++p) {
    size_t count = p + 1 == ratios.size()
                       ? n - offset
                       : static_cast<size_t>(std::floor(ratios[p] * n));
    std::vector<size_t> members(order.begin() + offset,
                                order.begin() + offset + count);
    std::sort(members.begin(), members.end());
    std::vector<LabeledSentence> sentences;
    sentences.reserve(count);
    for (size_t idx : members) sentences.push_back(ds[idx]);
    parts.emplace_back(ds.scheme(), std::move(sentences), ds.role());
    offset += count;
  }
  return parts;
}

Dataset MixGoldFraction(const Dataset& source_labeled,
                        const Dataset& target_gold, double fraction,
                        uint64_t seed) {
  if (!(source_labeled.scheme() == target_gold.scheme())) {
    throw Error(ErrorCode::kSchemeMismatch,
                "source and target gold use different tag schemes");
  }
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "gold fraction outside [0, 1]");
  }
  const size_t n = target_gold.size();
  const size_t take = static_cast<size_t>(std::llround(fraction * n));
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  Rng rng(seed);
  rng.Shuffle(order);
  order.resize(take);
  std::sort(order.begin(), order.end());

  std::vector<LabeledSentence> sentences = source_labeled.sentences();
  for (size_t idx : order) sentences.push_back(target_gold[idx]);
  return Dataset(source_labeled.scheme(), std::move(sentences), Role::kLabeled);
}

std::pair<Dataset, Dataset> FilterAndSplitByProbability(
    const Dataset& ds, std::span<const double> probabilities, double threshold,
    uint64_t seed) {
  if (probabilities.size() != ds.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                std::to_string(probabilities.size()) + " probabilities for " +
                    std::to_string(ds.size()) + " sentences");
  }
  std::vector<LabeledSentence> kept;
  for (size_t i = 0; i < ds.size(); ++i) {
    if (probabilities[i] > threshold) kept.push_back(ds[i]);
  }
  Dataset filtered(ds.scheme(), std::move(kept), ds.role());
  const double ratios[] = {0.3, 0.7};
  auto parts = SplitDataset(filtered, ratios, seed);
  return {parts[0].WithRole(Role::kDev), parts[1].WithRole(Role::kTest)};
}

Dataset Concat(const Dataset& a, const Dataset& b, Role role) {
  if (!(a.scheme() == b.scheme())) {
    throw Error(ErrorCode::kSchemeMismatch, "cannot concatenate datasets");
  }
  std::vector<LabeledSentence> sentences = a.sentences();
  sentences.insert(sentences.end(), b.sentences().begin(),
                   b.sentences().end());
  return Dataset(a.scheme(), std::move(sentences), role);
}

}  // namespace selftag
