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

#ifndef HETSUP_MODEL_H_
#define HETSUP_MODEL_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hetsup/features.h"
#include "hetsup/math.h"
#include "hetsup/random.h"
#include "hetsup/supervision.h"

namespace hetsup {

// Which labels compete when inferring a mention's true label.
enum class CandidatePolicy {
  kAnnotated,  // distinct labels among the mention's annotations
  kAllLabels,  // every label, None included
};

struct Hyperparams {
  int dim_v = 100;
  int dim_z = 50;
  // Weights of the feature-embedding and truth-discovery objectives.
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double alpha = 0.025;
  // Linearly decay alpha to 1e-4 * alpha over training.
  bool linear_decay = false;
  // Negative samples per positive feature pair.
  int negatives = 5;
  double dropout = 0.5;
  // Feature pairs per visited mention; 0 means 2 * |bag| capped at 50.
  int pair_samples = 0;
  int epochs = 10;
  uint64_t seed = 1;
  int min_count = 2;
  // Entropy threshold; unset means 0.8 * ln K.
  std::optional<double> eta;
  // Correctness probabilities inside / outside a proficient subset; unset
  // means phi0 = 1 / (K + 1) and phi1 = 1 - phi0.
  std::optional<double> phi1;
  std::optional<double> phi0;
  std::optional<int> max_pairs_per_sentence;
  CandidatePolicy candidates = CandidatePolicy::kAnnotated;
  // Renormalize the entropy over relation types before thresholding.
  bool renormalize_entropy = false;

  // Throws ConfigError.
  void Validate() const;

  double ResolvedPhi0(int num_relations) const;
  double ResolvedPhi1(int num_relations) const;
  double ResolvedEta(int num_relations) const;
};

inline constexpr int kMaxPairSamples = 50;

// All learnable parameters.
//   v, v_star  |F| x dim_v   feature and context embeddings
//   w          dim_z x dim_v  map from feature space to mention space
//   l          M x dim_z      proficient subset of each labeling function
//   t          (K+1) x dim_z  relation types, None at row 0
struct ModelParams {
  Matrix v;
  Matrix v_star;
  Matrix w;
  Matrix l;
  Matrix t;
  double phi1 = 0.75;
  double phi0 = 0.25;

  int dim_v() const { return static_cast<int>(w.cols()); }
  int dim_z() const { return static_cast<int>(w.rows()); }
  int num_features() const { return static_cast<int>(v.rows()); }
  int num_lfs() const { return static_cast<int>(l.rows()); }
  int num_labels() const { return static_cast<int>(t.rows()); }

  // v, v_star ~ U(-0.5/dim_v, 0.5/dim_v); w, l, t ~ U(-1/sqrt(dim_z), ...).
  static ModelParams Initialize(int num_features, int num_lfs, int num_labels,
                                int dim_v, int dim_z, double phi1, double phi0,
                                Rng &rng);

  // Rounds every array entry to the nearest float, the stored precision.
  void RoundToFloat();

  // Throws ValidationError unless all entries are finite, shapes agree and
  // 0 < phi0 < phi1 < 1.
  void Validate() const;

  friend bool operator==(const ModelParams &, const ModelParams &) = default;
};

// Per-dimension inverted-dropout scale: 0 for dropped units and 1/(1-p) for
// kept ones.
struct DropoutMask {
  std::vector<double> scale;

  static DropoutMask Sample(int dim, double p, Rng &rng);
  static DropoutMask FromKeep(std::span<const uint8_t> keep, double p);
};

struct MentionForward {
  // Averaged feature embedding after dropout, the input to w.
  std::vector<double> input;
  // tanh(w * input)
  std::vector<double> z;
};

// Throws std::invalid_argument on an empty bag.
MentionForward ForwardMention(std::span<const int> feature_ids,
                              const ModelParams &params,
                              const DropoutMask *mask = nullptr);

std::vector<double> MentionEmbedding(std::span<const int> feature_ids,
                                     const ModelParams &params,
                                     const DropoutMask *mask = nullptr);

// sigmoid(z . l_i)
double MatchProb(std::span<const double> z, std::span<const double> l_i);

// Softmax of z . t_j over all labels.
std::vector<double> TypeDistribution(std::span<const double> z,
                                     const Matrix &t);

// -sum_{j >= 1} p_j ln p_j, skipping None at index 0 and treating 0 ln 0 as
// 0. With renormalize the relation entries are first rescaled to sum to 1.
double EntropyOverRelations(std::span<const double> p,
                            bool renormalize = false);

// A trained extractor: label names, labeling-function names, vocabulary and
// parameters.
struct Model {
  LabelSpace labels;
  std::vector<std::string> lf_names;
  FeatureVocab vocab;
  ModelParams params;
};

// Binary format, little endian:
//   "REHS1", u32 dim_v, dim_z, |F|, M, K,
//   K+1 label names, M function names, |F| features (u32 length + UTF-8),
//   f32 arrays v, v_star, w (row-major), l, t, then f64 phi1, phi0.
void SaveModel(const Model &model, std::ostream &out);
Model LoadModel(std::istream &in);
void SaveModelFile(const Model &model, const std::string &path);
Model LoadModelFile(const std::string &path);

}  // namespace hetsup

#endif  // HETSUP_MODEL_H_
