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

#ifndef HETSUP_SYNTH_H_
#define HETSUP_SYNTH_H_

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hetsup/corpus.h"
#include "hetsup/features.h"
#include "hetsup/supervision.h"

namespace hetsup {

struct SynthOptions {
  uint64_t seed = 1;
  int train_sentences = 2500;
  int test_sentences = 500;
};

// A planted-noise dataset: three relation types over the same entity types
// plus None, two trigger pattern functions per type, a KB function per type
// that also fires on contexts of other types and of None, and None pattern
// functions. Every sentence has two entities,
// so each yields a forward and a reversed mention; reversed mentions are
// gold None.
struct SyntheticDataset {
  LabelSpace labels;
  Corpus train;
  Corpus test;
  // Mention id (GenerateMentions order) -> label.
  std::map<int, int> train_gold;
  std::map<int, int> test_gold;
  // One JSON record per line of the labeling-function file.
  std::vector<std::string> lf_records;
  // Pairs file name -> (e1, e2) pairs.
  std::map<std::string, std::vector<std::pair<std::string, std::string>>>
      kb_files;
  std::vector<std::pair<std::string, std::string>> brown;
};

SyntheticDataset GenerateSynthetic(const SynthOptions &options);

// Writes train.jsonl, test.jsonl, lfs.jsonl, the kb_*.tsv pairs files,
// train_gold.tsv, test_gold.tsv, brown.tsv and config.toml into dir,
// creating it if needed.
void WriteSynthetic(const SyntheticDataset &data, const std::string &dir);

}  // namespace hetsup

#endif  // HETSUP_SYNTH_H_
