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

#ifndef HETSUP_TRAINER_H_
#define HETSUP_TRAINER_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hetsup/features.h"
#include "hetsup/math.h"
#include "hetsup/model.h"
#include "hetsup/random.h"
#include "hetsup/supervision.h"

namespace hetsup {

// Noise distribution over feature ids, proportional to count^power. All-zero
// counts give a uniform distribution.
class NoiseTable {
 public:
  explicit NoiseTable(std::span<const int64_t> counts, double power = 0.75);

  int Sample(Rng &rng) const;
  double probability(int id) const;
  size_t size() const { return cumulative_.size(); }

 private:
  std::vector<double> cumulative_;
};

// Gradients (for ascent) of
//   log sigmoid(input . context) + sum_k log sigmoid(-input . negatives[k]).
struct SgnsGradients {
  double objective = 0.0;
  std::vector<double> d_input;
  std::vector<double> d_context;
  std::vector<std::vector<double>> d_negatives;
};

SgnsGradients ComputeSgnsGradients(
    std::span<const double> input, std::span<const double> context,
    std::span<const std::span<const double>> negatives);

// One negative-sampling ascent step on the pair (input, context) with
// `negatives` noise draws. Updates v[input], v_star[context] and the drawn
// v_star rows; draws equal to `context` are skipped. Returns the objective
// before the update, or 0 for a self pair, which is not trained.
double SgnsStep(int input, int context, ModelParams &params,
                const NoiseTable &noise, int negatives, double rate, Rng &rng);

// Cross-entropy -log p(label | z) and its gradients for descent.
struct ExtractionGradients {
  double loss = 0.0;
  std::vector<double> d_z;
  Matrix d_t;
};

ExtractionGradients ComputeExtractionGradients(std::span<const double> z,
                                               const Matrix &t, int label);

// Updates t by one descent step and returns the loss; the gradient with
// respect to z (computed before the update) goes to d_z.
double ExtractionStep(std::span<const double> z, int label, ModelParams &params,
                      double rate, std::vector<double> *d_z);

// Gradients of a loss L through z = tanh(w * input) with
// input = mask * mean(v[bag]), given upstream dL/dz.
struct MentionGradients {
  Matrix d_w;
  // dL/dv_i, shared by every feature in the bag.
  std::vector<double> d_feature;
};

MentionGradients ComputeMentionGradients(const MentionForward &forward,
                                         std::span<const double> d_z,
                                         const Matrix &w, size_t bag_size,
                                         const DropoutMask *mask = nullptr);

// Applies one descent step of ComputeMentionGradients to w and v[bag].
void BackpropMention(std::span<const int> bag, const MentionForward &forward,
                     std::span<const double> d_z, ModelParams &params,
                     double rate, const DropoutMask *mask = nullptr);

struct EpochStats {
  int epoch = 0;
  int mentions = 0;
  // Means per visited mention.
  double extraction_loss = 0.0;       // -J_R
  double embedding_objective = 0.0;   // J_E
  double truth_log_likelihood = 0.0;  // J_T

  // -J_R - lambda2 J_T
  double SupervisedLoss(double lambda2) const {
    return extraction_loss - lambda2 * truth_log_likelihood;
  }
};

struct TrainReport {
  std::vector<EpochStats> epochs;
  int labeled_mentions = 0;
  int skipped_empty_bags = 0;
  double seconds = 0.0;

  std::string ToJson() const;
};

struct TrainResult {
  ModelParams params;
  TrainReport report;
};

// Jointly fits embeddings, truth discovery and the extractor by SGD over the
// labeled mentions. bags is indexed by mention id; feature_counts drive the
// noise distribution and fix |F|. Labeled mentions with empty bags are
// skipped. Throws ConfigError when nothing is left to train on and Error
// when a loss turns non-finite. Parameters come back rounded to float.
TrainResult Train(std::span<const FeatureBag> bags,
                  const AnnotationSet &annotations,
                  std::span<const int64_t> feature_counts, int num_labels,
                  int num_lfs, const Hyperparams &hyper,
                  std::ostream *log = nullptr);

}  // namespace hetsup

#endif  // HETSUP_TRAINER_H_
