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

#ifndef SELFTAG_SELECTION_H_
#define SELFTAG_SELECTION_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "selftag/corpus.h"
#include "selftag/tagger.h"

namespace selftag {

// Which pseudo-labeled examples get promoted: those whose minimum token
// confidence reaches tau, or the s examples with the highest minimum
// confidence.
class SelectionPolicy {
 public:
  enum class Kind { kThreshold, kFixedSize };

  // tau in (0, 1); throws kInvalidPolicy.
  static SelectionPolicy Threshold(double tau);
  // s >= 1; throws kInvalidPolicy.
  static SelectionPolicy FixedSize(int s);
  // "threshold:0.90" or "fixed:100".
  static SelectionPolicy Parse(std::string_view text);

  Kind kind() const { return kind_; }
  double tau() const { return tau_; }
  int s() const { return s_; }
  std::string ToString() const;

  bool operator==(const SelectionPolicy& other) const = default;

 private:
  SelectionPolicy(Kind kind, double tau, int s) : kind_(kind), tau_(tau), s_(s) {}

  Kind kind_;
  double tau_;
  int s_;
};

// Minimum per-token confidence. Throws kEmptyPrediction.
double ExampleConfidence(const Prediction& prediction);

// Indices into the input, each list in input order.
struct SelectionIndices {
  std::vector<size_t> selected;
  std::vector<size_t> remaining;
};

// Fixed-size ties at equal confidence go to the earlier position.
SelectionIndices SelectByConfidence(std::span<const double> confidences,
                                    const SelectionPolicy& policy);

struct ScoredSentence {
  LabeledSentence sentence;
  Prediction prediction;
};

struct SelectionResult {
  std::vector<ScoredSentence> selected;
  std::vector<ScoredSentence> remaining;
};

SelectionResult Select(std::vector<ScoredSentence> candidates,
                       const SelectionPolicy& policy);

}  // namespace selftag

#endif  // SELFTAG_SELECTION_H_
