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

#include "selftag/selection.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "selftag/error.h"

namespace selftag {

SelectionPolicy SelectionPolicy::Threshold(double tau) {
  if (!(tau > 0.0 && tau < 1.0)) {
    throw Error(ErrorCode::kInvalidPolicy,
                "threshold tau must lie in (0, 1), got " + std::to_string(tau));
  }
  return SelectionPolicy(Kind::kThreshold, tau, 0);
}

SelectionPolicy SelectionPolicy::FixedSize(int s) {
  if (s < 1) {
    throw Error(ErrorCode::kInvalidPolicy,
                "fixed size s must be >= 1, got " + std::to_string(s));
  }
  return SelectionPolicy(Kind::kFixedSize, 0.0, s);
}

SelectionPolicy SelectionPolicy::Parse(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  const size_t colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorCode::kInvalidPolicy,
                "expected threshold:<tau> or fixed:<s>, got '" +
                    std::string(text) + "'");
  }
  std::string_view kind = text.substr(0, colon);
  std::string_view value = text.substr(colon + 1);
  const char* first = value.data();
  const char* last = value.data() + value.size();
  if (kind == "threshold") {
    double tau = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, tau);
    if (ec == std::errc() && ptr == last) return Threshold(tau);
  } else if (kind == "fixed") {
    int s = 0;
    auto [ptr, ec] = std::from_chars(first, last, s);
    if (ec == std::errc() && ptr == last) return FixedSize(s);
  }
  throw Error(ErrorCode::kInvalidPolicy,
              "cannot parse selection policy '" + std::string(text) + "'");
}

std::string SelectionPolicy::ToString() const {
  if (kind_ == Kind::kFixedSize) return "fixed:" + std::to_string(s_);
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), tau_);
  return "threshold:" + std::string(buf, ptr);
}

double ExampleConfidence(const Prediction& prediction) {
  if (prediction.confidences.empty()) {
    throw Error(ErrorCode::kEmptyPrediction, "prediction has no tokens");
  }
  return *std::min_element(prediction.confidences.begin(),
                           prediction.confidences.end());
}

SelectionIndices SelectByConfidence(std::span<const double> confidences,
                                    const SelectionPolicy& policy) {
  const size_t n = confidences.size();
  std::vector<bool> chosen(n, false);
  if (policy.kind() == SelectionPolicy::Kind::kThreshold) {
    for (size_t i = 0; i < n; ++i) chosen[i] = confidences[i] >= policy.tau();
  } else {
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      return confidences[a] > confidences[b];
    });
    const size_t take = std::min(n, static_cast<size_t>(policy.s()));
    for (size_t k = 0; k < take; ++k) chosen[order[k]] = true;
  }
  SelectionIndices out;
  for (size_t i = 0; i < n; ++i) {
    (chosen[i] ? out.selected : out.remaining).push_back(i);
  }
  return out;
}

SelectionResult Select(std::vector<ScoredSentence> candidates,
                       const SelectionPolicy& policy) {
  std::vector<double> confidences;
  confidences.reserve(candidates.size());
  for (const auto& c : candidates) {
    confidences.push_back(ExampleConfidence(c.prediction));
  }
  SelectionIndices idx = SelectByConfidence(confidences, policy);
  SelectionResult out;
  out.selected.reserve(idx.selected.size());
  out.remaining.reserve(idx.remaining.size());
  for (size_t i : idx.selected) out.selected.push_back(std::move(candidates[i]));
  for (size_t i : idx.remaining) out.remaining.push_back(std::move(candidates[i]));
  return out;
}

}  // namespace selftag
