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

#include "hetsup/pipeline.h"

#include <ostream>

namespace hetsup {

PreparedCorpus PrepareCorpus(const Corpus &corpus, const BrownClusters *brown,
                             std::optional<int> max_pairs_per_sentence) {
  PreparedCorpus prepared;
  prepared.mentions = GenerateMentions(corpus, max_pairs_per_sentence);
  prepared.features.reserve(prepared.mentions.size());
  for (const RelationMention &m : prepared.mentions) {
    prepared.features.push_back(
        ExtractFeatures(m, corpus[m.sentence_index], brown));
  }
  return prepared;
}

std::vector<FeatureBag> EncodeAll(const PreparedCorpus &prepared,
                                  const FeatureVocab &vocab) {
  std::vector<FeatureBag> bags;
  bags.reserve(prepared.mentions.size());
  for (const RelationMention &m : prepared.mentions) {
    bags.push_back(Encode(m.id, prepared.features[m.id], vocab));
  }
  return bags;
}

TrainingRun TrainOnCorpus(const Corpus &corpus,
                          const LabelingFunctionSet &functions,
                          const BrownClusters *brown, const Hyperparams &hyper,
                          std::ostream *log) {
  hyper.Validate();
  PreparedCorpus prepared =
      PrepareCorpus(corpus, brown, hyper.max_pairs_per_sentence);
  TrainingRun run;
  run.annotations = Annotate(corpus, prepared.mentions, functions.functions);

  std::vector<std::vector<std::string>> labeled_features;
  for (int m : run.annotations.LabeledMentions()) {
    labeled_features.push_back(prepared.features[m]);
  }
  FeatureVocab vocab = BuildVocab(labeled_features, hyper.min_count);
  if (log != nullptr) {
    *log << "mentions=" << prepared.mentions.size()
         << " labeled=" << labeled_features.size()
         << " features=" << vocab.size() << '\n';
  }
  const std::vector<FeatureBag> bags = EncodeAll(prepared, vocab);

  TrainResult trained =
      Train(bags, run.annotations, vocab.counts(), functions.labels.size(),
            static_cast<int>(functions.functions.size()), hyper, log);

  run.model.labels = functions.labels;
  for (const LabelingFunction &lf : functions.functions) {
    run.model.lf_names.push_back(lf.name);
  }
  run.model.vocab = std::move(vocab);
  run.model.params = std::move(trained.params);
  run.report = std::move(trained.report);
  run.truth = DiscoverTruth(run.model.params, bags, run.annotations,
                            hyper.candidates);
  run.mentions = std::move(prepared.mentions);
  return run;
}

std::vector<Prediction> PredictCorpus(const Corpus &corpus, const Model &model,
                                      const BrownClusters *brown, double eta,
                                      bool renormalize_entropy,
                                      std::optional<int> max_pairs_per_sentence) {
  const PreparedCorpus prepared =
      PrepareCorpus(corpus, brown, max_pairs_per_sentence);
  std::vector<Prediction> predictions;
  predictions.reserve(prepared.mentions.size());
  for (const FeatureBag &bag : EncodeAll(prepared, model.vocab)) {
    predictions.push_back(
        Predict(bag, model.params, eta, renormalize_entropy));
  }
  return predictions;
}

}  // namespace hetsup
