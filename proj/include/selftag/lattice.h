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

// Log-domain scores of a first-order linear chain and the two dynamic
// programs over it.

#ifndef SELFTAG_LATTICE_H_
#define SELFTAG_LATTICE_H_

#include <span>
#include <vector>

namespace selftag {

// n x |V| unary scores and |V| x |V| transition scores (from, to).
class Lattice {
 public:
  Lattice(int length, int num_labels)
      : length_(length), num_labels_(num_labels),
        unary_(static_cast<size_t>(length) * num_labels, 0.0),
        transition_(static_cast<size_t>(num_labels) * num_labels, 0.0) {}

  int length() const { return length_; }
  int num_labels() const { return num_labels_; }

  double unary(int j, int y) const { return unary_[j * num_labels_ + y]; }
  double& unary(int j, int y) { return unary_[j * num_labels_ + y]; }
  double transition(int from, int to) const {
    return transition_[from * num_labels_ + to];
  }
  double& transition(int from, int to) {
    return transition_[from * num_labels_ + to];
  }

  std::span<const double> unary_scores() const { return unary_; }
  std::span<const double> transition_scores() const { return transition_; }

  bool AllFinite() const;

 private:
  int length_;
  int num_labels_;
  std::vector<double> unary_;
  std::vector<double> transition_;
};

// Stable log(sum(exp(values))). Returns -inf for an empty range.
double LogSumExp(std::span<const double> values);

struct ForwardBackwardResult {
  double log_z = 0.0;           // from the forward recursion
  double log_z_backward = 0.0;  // from the backward recursion
  int length = 0;
  int num_labels = 0;
  std::vector<double> alpha;      // n x |V|, log forward messages
  std::vector<double> beta;       // n x |V|, log backward messages
  std::vector<double> marginals;  // n x |V|, posterior p(y_j = y | x)

  double marginal(int j, int y) const { return marginals[j * num_labels + y]; }
  double log_alpha(int j, int y) const { return alpha[j * num_labels + y]; }
  double log_beta(int j, int y) const { return beta[j * num_labels + y]; }
};

// Throws kNonFiniteScore if any lattice entry is NaN or infinite.
ForwardBackwardResult ForwardBackward(const Lattice& lattice);

// p(y_j = from, y_{j+1} = to | x) for 0 <= j < n-1.
double PairMarginal(const Lattice& lattice, const ForwardBackwardResult& fb,
                    int j, int from, int to);

struct ViterbiResult {
  std::vector<int> path;
  double score = 0.0;
};

// Highest-scoring path. Among equal-scoring paths, the one with the lower
// label at the latest position where they differ wins.
ViterbiResult Viterbi(const Lattice& lattice);

double PathScore(const Lattice& lattice, std::span<const int> path);

}  // namespace selftag

#endif  // SELFTAG_LATTICE_H_
