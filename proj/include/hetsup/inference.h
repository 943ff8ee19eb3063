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

#ifndef HETSUP_INFERENCE_H_
#define HETSUP_INFERENCE_H_

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hetsup/features.h"
#include "hetsup/model.h"
#include "hetsup/supervision.h"

namespace hetsup {

enum class NoneReason { kNotNone, kClassifier, kEntropy };

std::string_view ReasonName(NoneReason reason);

struct Prediction {
  int mention_id = 0;
  int label = kNoneLabel;
  // p(. | z) over all labels, None first.
  std::vector<double> distribution;
  double entropy = 0.0;
  NoneReason reason = NoneReason::kClassifier;
};

// None when the argmax is None or the entropy over relation types exceeds
// eta; otherwise the argmax relation. Ties go to the smaller label.
Prediction PredictFromDistribution(int mention_id,
                                   std::vector<double> distribution, double eta,
                                   bool renormalize_entropy = false);

// Uses the dropout-free embedding. An empty bag predicts None (classifier)
// from a zero embedding.
Prediction Predict(const FeatureBag &bag, const ModelParams &params,
                   double eta, bool renormalize_entropy = false);

// argmax over relation types only (labels 1..K), ties to the smaller label.
int Classify(std::span<const double> distribution);
int Classify(const FeatureBag &bag, const ModelParams &params);

struct MetricsReport {
  // Extraction: over non-None predictions and gold labels.
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  int gold_non_none = 0;
  int predicted_non_none = 0;
  int correct_non_none = 0;
  // Classification: over gold non-None mentions.
  double accuracy = 0.0;
  int evaluated = 0;
  int correct = 0;
  std::vector<std::string> warnings;

  std::string ToJson(bool classification) const;
};

// Micro-averaged. Both maps are mention id -> label and must have the same
// key set; otherwise throws ValidationError. Zero denominators give 0 and a
// warning.
MetricsReport EvaluateExtraction(const std::map<int, int> &predicted,
                                 const std::map<int, int> &gold);

// Accuracy over mentions whose gold label is not None. predicted should come
// from Classify.
MetricsReport EvaluateClassification(const std::map<int, int> &predicted,
                                     const std::map<int, int> &gold);

// TSV `mention_id<TAB>label<TAB>reason<TAB>entropy<TAB>p_None,p_r1,...`
// preceded by a `#` header line naming the labels.
void WritePredictions(std::span<const Prediction> predictions,
                      const LabelSpace &labels, std::ostream &out);

struct PredictionFile {
  std::vector<std::string> label_names;
  std::vector<Prediction> predictions;
};

PredictionFile ReadPredictions(std::istream &in);

// TSV `mention_id<TAB>label`. Unseen label names are appended to
// label_names, which is seeded with None.
std::map<int, int> ReadGold(std::istream &in,
                            std::vector<std::string> &label_names);
void WriteGold(const std::map<int, int> &gold, const LabelSpace &labels,
               std::ostream &out);

}  // namespace hetsup

#endif  // HETSUP_INFERENCE_H_
