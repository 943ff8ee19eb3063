// Copyright 2026 The hetsup Authors.
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

#ifndef HETSUP_TRUTH_H_
#define HETSUP_TRUTH_H_

#include <iosfwd>
#include <span>
#include <vector>

#include "hetsup/features.h"
#include "hetsup/model.h"
#include "hetsup/supervision.h"

namespace hetsup {

// Log-likelihood of a mention's annotations being correct exactly when they
// equal `candidate`, with membership in each function's proficient subset
// integrated out:
//
//   sum_i log( s_i * phi1^d_i (1-phi1)^(1-d_i)
//            + (1-s_i) * phi0^d_i (1-phi0)^(1-d_i) ),
//
// where s_i = sigmoid(match_scores[i]) and d_i = [votes[i].label == candidate].
// match_scores[i] is z . l for the function that cast votes[i].
double LocalLogLikelihood(std::span<const Vote> votes,
                          std::span<const double> match_scores, double phi1,
                          double phi0, int candidate);

double LocalLogLikelihood(std::span<const Vote> votes,
                          std::span<const double> z, const ModelParams &params,
                          int candidate);

// Ascending label indices that compete for the true label.
std::vector<int> CandidateLabels(std::span<const Vote> votes,
                                 CandidatePolicy policy, int num_labels);

// argmax of LocalLogLikelihood over the candidates; ties go to the smallest
// label index. votes must be non-empty.
int InferTrueLabel(std::span<const Vote> votes, std::span<const double> z,
                   const ModelParams &params,
                   CandidatePolicy policy = CandidatePolicy::kAnnotated);

struct TruthGradients {
  double log_likelihood = 0.0;
  // d/dz of the log-likelihood.
  std::vector<double> d_z;
  // d/dl for the function behind each vote, aligned with votes.
  std::vector<std::vector<double>> d_l;
};

// Closed-form gradients of LocalLogLikelihood with the true label held fixed.
TruthGradients ComputeTruthGradients(std::span<const Vote> votes,
                                     std::span<const double> z,
                                     const ModelParams &params,
                                     int true_label);

struct TruthAssignment {
  int mention_id = 0;
  int label = kNoneLabel;
  std::vector<int> candidates;
};

// Infers true labels for every labeled mention with a non-empty bag, using
// dropout-free embeddings. bags is indexed by mention id.
std::vector<TruthAssignment> DiscoverTruth(
    const ModelParams &params, std::span<const FeatureBag> bags,
    const AnnotationSet &annotations,
    CandidatePolicy policy = CandidatePolicy::kAnnotated);

// Labels by plain vote count, ties to the smallest label index.
int MajorityVote(std::span<const Vote> votes);

// TSV `mention_id<TAB>inferred_label<TAB>candidates` with comma-joined
// candidate names.
void WriteTruth(std::span<const TruthAssignment> truth,
                const LabelSpace &labels, std::ostream &out);

}  // namespace hetsup

#endif  // HETSUP_TRUTH_H_
