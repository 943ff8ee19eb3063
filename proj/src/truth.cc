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

#include "hetsup/truth.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include "hetsup/math.h"

namespace hetsup {
namespace {

// Probabilities of the observed correctness given membership (q1) and
// non-membership (q0) in the proficient subset.
struct Correctness {
  double q1;
  double q0;
};

Correctness CorrectnessOf(bool correct, double phi1, double phi0) {
  return correct ? Correctness{phi1, phi0}
                 : Correctness{1.0 - phi1, 1.0 - phi0};
}

std::vector<double> MatchScores(std::span<const Vote> votes,
                                std::span<const double> z,
                                const ModelParams &params) {
  std::vector<double> scores;
  scores.reserve(votes.size());
  for (const Vote &v : votes) scores.push_back(Dot(z, params.l.Row(v.lf_id)));
  return scores;
}

}  // namespace

double LocalLogLikelihood(std::span<const Vote> votes,
                          std::span<const double> match_scores, double phi1,
                          double phi0, int candidate) {
  double total = 0.0;
  for (size_t i = 0; i < votes.size(); ++i) {
    const double s = Sigmoid(match_scores[i]);
    const Correctness c =
        CorrectnessOf(votes[i].label == candidate, phi1, phi0);
    total += std::log(s * c.q1 + (1.0 - s) * c.q0);
  }
  return total;
}

double LocalLogLikelihood(std::span<const Vote> votes,
                          std::span<const double> z, const ModelParams &params,
                          int candidate) {
  return LocalLogLikelihood(votes, MatchScores(votes, z, params), params.phi1,
                            params.phi0, candidate);
}

std::vector<int> CandidateLabels(std::span<const Vote> votes,
                                 CandidatePolicy policy, int num_labels) {
  std::vector<int> labels;
  if (policy == CandidatePolicy::kAllLabels) {
    for (int j = 0; j < num_labels; ++j) labels.push_back(j);
    return labels;
  }
  for (const Vote &v : votes) labels.push_back(v.label);
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  return labels;
}

// Relative gap below which two candidates count as tied.
constexpr double kTieTolerance = 1e-12;

int InferTrueLabel(std::span<const Vote> votes, std::span<const double> z,
                   const ModelParams &params, CandidatePolicy policy) {
  const std::vector<double> scores = MatchScores(votes, z, params);
  int best = -1;
  double best_value = 0.0;
  for (int candidate : CandidateLabels(votes, policy, params.num_labels())) {
    const double value = LocalLogLikelihood(votes, scores, params.phi1,
                                            params.phi0, candidate);
    if (best < 0 ||
        value > best_value + kTieTolerance * std::max(1.0, std::abs(best_value))) {
      best = candidate;
      best_value = value;
    }
  }
  return best;
}

TruthGradients ComputeTruthGradients(std::span<const Vote> votes,
                                     std::span<const double> z,
                                     const ModelParams &params,
                                     int true_label) {
  TruthGradients g;
  g.d_z.assign(z.size(), 0.0);
  g.d_l.reserve(votes.size());
  for (const Vote &v : votes) {
    std::span<const double> l_i = params.l.Row(v.lf_id);
    const double s = Sigmoid(Dot(z, l_i));
    const Correctness c =
        CorrectnessOf(v.label == true_label, params.phi1, params.phi0);
    const double likelihood = c.q0 + (c.q1 - c.q0) * s;
    g.log_likelihood += std::log(likelihood);
    // d/d(z . l_i) of log(q0 + (q1 - q0) s)
    const double d_score = (c.q1 - c.q0) * s * (1.0 - s) / likelihood;
    Axpy(d_score, l_i, g.d_z);
    std::vector<double> d_l(z.begin(), z.end());
    for (double &x : d_l) x *= d_score;
    g.d_l.push_back(std::move(d_l));
  }
  return g;
}

std::vector<TruthAssignment> DiscoverTruth(const ModelParams &params,
                                           std::span<const FeatureBag> bags,
                                           const AnnotationSet &annotations,
                                           CandidatePolicy policy) {
  std::vector<TruthAssignment> truth;
  for (int m : annotations.LabeledMentions()) {
    if (static_cast<size_t>(m) >= bags.size() || bags[m].empty()) continue;
    auto votes = annotations.votes(m);
    const std::vector<double> z = MentionEmbedding(bags[m].feature_ids, params);
    truth.push_back({m, InferTrueLabel(votes, z, params, policy),
                     CandidateLabels(votes, policy, params.num_labels())});
  }
  return truth;
}

int MajorityVote(std::span<const Vote> votes) {
  std::map<int, int> counts;
  for (const Vote &v : votes) ++counts[v.label];
  int best = kNoneLabel;
  int best_count = -1;
  for (const auto &[label, count] : counts) {
    if (count > best_count) {
      best = label;
      best_count = count;
    }
  }
  return best;
}

void WriteTruth(std::span<const TruthAssignment> truth,
                const LabelSpace &labels, std::ostream &out) {
  for (const TruthAssignment &a : truth) {
    out << a.mention_id << '\t' << labels.name(a.label) << '\t';
    for (size_t i = 0; i < a.candidates.size(); ++i) {
      if (i > 0) out << ',';
      out << labels.name(a.candidates[i]);
    }
    out << '\n';
  }
}

}  // namespace hetsup
