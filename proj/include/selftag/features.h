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

#ifndef SELFTAG_FEATURES_H_
#define SELFTAG_FEATURES_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace selftag {

enum class TemplateKind {
  kWord,          // w{o}=token
  kLowercase,     // lw{o}=lowercased token
  kPrefix,        // pre{k}[@o]=first k code points
  kSuffix,        // suf{k}[@o]=last k code points
  kShape,         // shape{o}=collapsed character classes
  kDigit,         // digit{o}=1 when every character is a digit
  kPunct,         // punct{o}=1 when every character is punctuation
  kLabelBigram,   // enables label-label transition weights
};

// One feature template. Its textual id (e.g. "w-1", "suf2", "pre3@1",
// "bigram") is also the prefix of every feature string it produces.
struct FeatureTemplate {
  TemplateKind kind = TemplateKind::kWord;
  int offset = 0;
  int affix_length = 0;  // prefix/suffix only, 1..4

  std::string Id() const;
  // Throws kInvalidTemplate.
  static FeatureTemplate Parse(std::string_view id);

  bool operator==(const FeatureTemplate& other) const = default;
};

std::vector<FeatureTemplate> DefaultTemplates();
std::vector<FeatureTemplate> ParseTemplates(std::string_view comma_separated);
std::string TemplatesToString(std::span<const FeatureTemplate> templates);
bool HasLabelBigram(std::span<const FeatureTemplate> templates);

// Observation features at `position`, in template order. Offsets falling
// outside the sentence yield "<id>=<BOS>" or "<id>=<EOS>".
std::vector<std::string> ExtractFeatures(std::span<const std::string> tokens,
                                         int position,
                                         std::span<const FeatureTemplate> templates);

std::string WordShape(std::string_view token);

}  // namespace selftag

#endif  // SELFTAG_FEATURES_H_
