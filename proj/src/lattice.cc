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

#include "selftag/lattice.h"

#include <cmath>
#include <limits>

#include "selftag/error.h"

namespace selftag {

bool Lattice::AllFinite() const {
  for (double v : unary_) {
    if (!std::isfinite(v)) return false;
  }
  for (double v : transition_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

double LogSumExp(std::span<const double> values) {
  double max = -std::numeric_limits<double>::infinity();
  for (double v : values) max = std::max(max, v);
  if (!std::isfinite(max)) return max;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - max);
  return max + std::log(sum);
}

ForwardBackwardResult ForwardBackward(const Lattice& lattice) {
  if (!lattice.AllFinite()) {
    throw Error(ErrorCode::kNonFiniteScore, "lattice has a non-finite entry");
  }
  const int n = lattice.length();
  const int v = lattice.num_labels();
  ForwardBackwardResult r;
  r.length = n;
  r.num_labels = v;
  r.alpha.assign(static_cast<size_t>(n) * v, 0.0);
  r.beta.assign(static_cast<size_t>(n) * v, 0.0);
  r.marginals.assign(static_cast<size_t>(n) * v, 0.0);
  if (n == 0) return r;

  std::vector<double> terms(v);
  for (int y = 0; y < v; ++y) r.alpha[y] = lattice.unary(0, y);
  for (int j = 1; j < n; ++j) {
    for (int y = 0; y < v; ++y) {
      for (int prev = 0; prev < v; ++prev) {
        terms[prev] = r.alpha[(j - 1) * v + prev] + lattice.transition(prev, y);
      }
      r.alpha[j * v + y] = lattice.unary(j, y) + LogSumExp(terms);
    }
  }
  r.log_z = LogSumExp(std::span<const double>(r.alpha).subspan((n - 1) * v, v));

  // beta[n-1] = 0
  for (int j = n - 2; j >= 0; --j) {
    for (int y = 0; y < v; ++y) {
      for (int next = 0; next < v; ++next) {
        terms[next] = lattice.transition(y, next) + lattice.unary(j + 1, next) +
                      r.beta[(j + 1) * v + next];
      }
      r.beta[j * v + y] = LogSumExp(terms);
    }
  }
  for (int y = 0; y < v; ++y) terms[y] = lattice.unary(0, y) + r.beta[y];
  r.log_z_backward = LogSumExp(terms);

  for (int j = 0; j < n; ++j) {
    for (int y = 0; y < v; ++y) {
      r.marginals[j * v + y] =
          std::exp(r.alpha[j * v + y] + r.beta[j * v + y] - r.log_z);
    }
  }
  return r;
}

double PairMarginal(const Lattice& lattice, const ForwardBackwardResult& fb,
                    int j, int from, int to) {
  return std::exp(fb.log_alpha(j, from) + lattice.transition(from, to) +
                  lattice.unary(j + 1, to) + fb.log_beta(j + 1, to) -
                  fb.log_z);
}

ViterbiResult Viterbi(const Lattice& lattice) {
  const int n = lattice.length();
  const int v = lattice.num_labels();
  ViterbiResult r;
  if (n == 0) return r;
  std::vector<double> best(static_cast<size_t>(n) * v);
  std::vector<int> back(static_cast<size_t>(n) * v, 0);
  for (int y = 0; y < v; ++y) best[y] = lattice.unary(0, y);
  for (int j = 1; j < n; ++j) {
    for (int y = 0; y < v; ++y) {
      // Strict '>' keeps the lowest predecessor index on ties.
      int arg = 0;
      double max = best[(j - 1) * v] + lattice.transition(0, y);
      for (int prev = 1; prev < v; ++prev) {
        double s = best[(j - 1) * v + prev] + lattice.transition(prev, y);
        if (s > max) {
          max = s;
          arg = prev;
        }
      }
      best[j * v + y] = max + lattice.unary(j, y);
      back[j * v + y] = arg;
    }
  }
  int last = 0;
  for (int y = 1; y < v; ++y) {
    if (best[(n - 1) * v + y] > best[(n - 1) * v + last]) last = y;
  }
  r.score = best[(n - 1) * v + last];
  r.path.assign(n, 0);
  r.path[n - 1] = last;
  for (int j = n - 1; j > 0; --j) r.path[j - 1] = back[j * v + r.path[j]];
  return r;
}

double PathScore(const Lattice& lattice, std::span<const int> path) {
  double s = 0.0;
  for (size_t j = 0; j < path.size(); ++j) {
    s += lattice.unary(static_cast<int>(j), path[j]);
    if (j > 0) s += lattice.transition(path[j - 1], path[j]);
  }
  return s;
}

}  // namespace selftag
