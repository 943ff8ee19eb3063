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

#ifndef HETSUP_FEATURES_H_
#define HETSUP_FEATURES_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hetsup/corpus.h"

namespace hetsup {

// token -> Brown cluster bit string.
using BrownClusters = std::unordered_map<std::string, std::string>;

// TSV `token<TAB>bitstring`, one entry per line.
BrownClusters ReadBrownClusters(std::istream &in);
BrownClusters LoadBrownClusters(const std::string &path);

// Width of the collocation windows on each side of an entity mention.
inline constexpr int kCollocationWindow = 3;

// Lexical features of a relation mention:
//
//   HEAD_EM1_<w>, HEAD_EM2_<w>   head token of each entity mention
//   TKN_EM1_<w>, TKN_EM2_<w>     every token inside each mention
//   <w>, <POS>                   tokens and POS tags between the mentions
//   "<w1> <w2>"                  bigrams in the 3-word window left and right
//                                of each mention, anchored on the mention's
//                                boundary token
//   EM1_BEFORE_EM2 | EM2_BEFORE_EM1
//   EM_DISTANCE_<k>              tokens between the mentions
//   EM_NUMBER_<k>                entity mentions strictly between them
//   EM_BEFORE_<w>, EM_AFTER_<w>  unigram adjacent to each mention
//   BROWN_<bits>                 cluster of each head and between-token
//
// Tab, newline and carriage return inside tokens are escaped as \t, \n, \r.
std::vector<std::string> ExtractFeatures(const RelationMention &mention,
                                         const Sentence &sentence,
                                         const BrownClusters *brown = nullptr);

// Dense feature id map. Ids follow first occurrence in the counted input.
class FeatureVocab {
 public:
  FeatureVocab() = default;
  FeatureVocab(std::vector<std::string> features, std::vector<int64_t> counts,
               int min_count);

  size_t size() const { return features_.size(); }
  int min_count() const { return min_count_; }
  const std::string &feature(int id) const { return features_[id]; }
  int64_t count(int id) const { return counts_[id]; }
  const std::vector<std::string> &features() const { return features_; }
  const std::vector<int64_t> &counts() const { return counts_; }

  std::optional<int> Find(std::string_view feature) const;

  // TSV `id<TAB>count<TAB>feature`.
  void Write(std::ostream &out) const;

 private:
  std::vector<std::string> features_;
  std::vector<int64_t> counts_;
  std::unordered_map<std::string, int> index_;
  int min_count_ = 1;
};

// Counts every occurrence across feature_lists and keeps features seen at
// least min_count times. Throws ConfigError if min_count < 1.
FeatureVocab BuildVocab(std::span<const std::vector<std::string>> feature_lists,
                        int min_count);

struct FeatureBag {
  int mention_id = 0;
  // Sorted, unique.
  std::vector<int> feature_ids;

  bool empty() const { return feature_ids.empty(); }
};

// Drops out-of-vocabulary features and deduplicates.
FeatureBag Encode(int mention_id, std::span<const std::string> features,
                  const FeatureVocab &vocab);

}  // namespace hetsup

#endif  // HETSUP_FEATURES_H_
