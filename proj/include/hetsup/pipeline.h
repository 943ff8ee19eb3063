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

#ifndef HETSUP_PIPELINE_H_
#define HETSUP_PIPELINE_H_

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hetsup/corpus.h"
#include "hetsup/features.h"
#include "hetsup/inference.h"
#include "hetsup/model.h"
#include "hetsup/supervision.h"
#include "hetsup/trainer.h"
#include "hetsup/truth.h"

namespace hetsup {

// Mentions of a corpus with their raw feature strings, indexed by mention id.
struct PreparedCorpus {
  std::vector<RelationMention> mentions;
  std::vector<std::vector<std::string>> features;
};

PreparedCorpus PrepareCorpus(const Corpus &corpus, const BrownClusters *brown,
                             std::optional<int> max_pairs_per_sentence = {});

std::vector<FeatureBag> EncodeAll(const PreparedCorpus &prepared,
                                  const FeatureVocab &vocab);

struct TrainingRun {
  Model model;
  TrainReport report;
  std::vector<RelationMention> mentions;
  AnnotationSet annotations;
  std::vector<TruthAssignment> truth;
};

// Annotates the corpus, builds the vocabulary over annotated mentions,
// trains, and infers final true labels.
TrainingRun TrainOnCorpus(const Corpus &corpus,
                          const LabelingFunctionSet &functions,
                          const BrownClusters *brown, const Hyperparams &hyper,
                          std::ostream *log = nullptr);

std::vector<Prediction> PredictCorpus(
    const Corpus &corpus, const Model &model, const BrownClusters *brown,
    double eta, bool renormalize_entropy = false,
    std::optional<int> max_pairs_per_sentence = {});

}  // namespace hetsup

#endif  // HETSUP_PIPELINE_H_
