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

#include "hetsup/features.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include "hetsup/errors.h"

namespace hetsup {
namespace {

std::string Escape(std::string_view token) {
  std::string out;
  out.reserve(token.size());
  for (char c : token) {
    switch (c) {
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

class FeatureWriter {
 public:
  FeatureWriter(const Sentence &sentence, const BrownClusters *brown)
      : sentence_(sentence), brown_(brown) {}

  void Add(std::string feature) { features_.push_back(std::move(feature)); }

  std::string Token(int i) const { return Escape(sentence_.tokens[i]); }
  std::string Pos(int i) const { return Escape(sentence_.pos[i]); }

  void AddBrown(int i) {
    if (brown_ == nullptr) return;
    auto it = brown_->find(sentence_.tokens[i]);
    if (it != brown_->end()) Add("BROWN_" + Escape(it->second));
  }

  // Bigrams over tokens[first, last], clipped to the sentence.
  void AddBigrams(int first, int last) {
    first = std::max(first, 0);
    last = std::min(last, static_cast<int>(sentence_.tokens.size()) - 1);
    for (int i = first; i < last; ++i) Add(Token(i) + " " + Token(i + 1));
  }

  std::vector<std::string> Release() { return std::move(features_); }

 private:
  const Sentence &sentence_;
  const BrownClusters *brown_;
  std::vector<std::string> features_;
};

}  // namespace

BrownClusters ReadBrownClusters(std::istream &in) {
  BrownClusters clusters;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size()) {
      throw ParseError("expected token<TAB>bitstring", line_number);
    }
    clusters.emplace(line.substr(0, tab), line.substr(tab + 1));
  }
  return clusters;
}

BrownClusters LoadBrownClusters(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open Brown cluster file: " + path);
  return ReadBrownClusters(in);
}

std::vector<std::string> ExtractFeatures(const RelationMention &mention,
                                         const Sentence &sentence,
                                         const BrownClusters *brown) {
  FeatureWriter out(sentence, brown);
  const EntitySpan &e1 = mention.e1;
  const EntitySpan &e2 = mention.e2;
  const bool e1_first = e1.start < e2.start;
  const EntitySpan &left = e1_first ? e1 : e2;
  const EntitySpan &right = e1_first ? e2 : e1;
  const int n = static_cast<int>(sentence.tokens.size());

  out.Add("HEAD_EM1_" + out.Token(e1.head));
  out.Add("HEAD_EM2_" + out.Token(e2.head));
  for (int i = e1.start; i < e1.end; ++i) out.Add("TKN_EM1_" + out.Token(i));
  for (int i = e2.start; i < e2.end; ++i) out.Add("TKN_EM2_" + out.Token(i));

  for (int i = left.end; i < right.start; ++i) out.Add(out.Token(i));
  for (int i = left.end; i < right.start; ++i) out.Add(out.Pos(i));

  for (const EntitySpan *em : {&e1, &e2}) {
    out.AddBigrams(em->start - kCollocationWindow, em->start);
    out.AddBigrams(em->end - 1, em->end - 1 + kCollocationWindow);
  }

  out.Add(e1_first ? "EM1_BEFORE_EM2" : "EM2_BEFORE_EM1");
  out.Add("EM_DISTANCE_" + std::to_string(std::max(0, right.start - left.end)));
  int between = 0;
  for (const EntitySpan &e : sentence.entities) {
    if (e.start >= left.end && e.end <= right.start) ++between;
  }
  out.Add("EM_NUMBER_" + std::to_string(between));

  for (const EntitySpan *em : {&e1, &e2}) {
    if (em->start > 0) out.Add("EM_BEFORE_" + out.Token(em->start - 1));
    if (em->end < n) out.Add("EM_AFTER_" + out.Token(em->end));
  }

  out.AddBrown(e1.head);
  out.AddBrown(e2.head);
  for (int i = left.end; i < right.start; ++i) out.AddBrown(i);
  return out.Release();
}

FeatureVocab::FeatureVocab(std::vector<std::string> features,
                           std::vector<int64_t> counts, int min_count)
    : features_(std::move(features)),
      counts_(std::move(counts)),
      min_count_(min_count) {
  counts_.resize(features_.size(), 0);
  index_.reserve(features_.size());
  for (size_t i = 0; i < features_.size(); ++i) {
    if (!index_.emplace(features_[i], static_cast<int>(i)).second) {
      throw ValidationError("duplicate feature in vocabulary: " + features_[i]);
    }
  }
}

std::optional<int> FeatureVocab::Find(std::string_view feature) const {
  auto it = index_.find(std::string(feature));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void FeatureVocab::Write(std::ostream &out) const {
  for (size_t i = 0; i < features_.size(); ++i) {
    out << i << '\t' << counts_[i] << '\t' << features_[i] << '\n';
  }
}

FeatureVocab BuildVocab(std::span<const std::vector<std::string>> feature_lists,
                        int min_count) {
  if (min_count < 1) throw ConfigError("min_count must be at least 1");
  std::unordered_map<std::string, int64_t> counts;
  std::vector<std::string> first_seen;
  for (const auto &list : feature_lists) {
    for (const std::string &f : list) {
      auto [it, inserted] = counts.try_emplace(f, 0);
      if (inserted) first_seen.push_back(f);
      ++it->second;
    }
  }
  std::vector<std::string> kept;
  std::vector<int64_t> kept_counts;
  for (std::string &f : first_seen) {
    const int64_t c = counts[f];
    if (c < min_count) continue;
    kept.push_back(std::move(f));
    kept_counts.push_back(c);
  }
  return FeatureVocab(std::move(kept), std::move(kept_counts), min_count);
}

FeatureBag Encode(int mention_id, std::span<const std::string> features,
                  const FeatureVocab &vocab) {
  FeatureBag bag;
  bag.mention_id = mention_id;
  for (const std::string &f : features) {
    if (auto id = vocab.Find(f)) bag.feature_ids.push_back(*id);
  }
  std::sort(bag.feature_ids.begin(), bag.feature_ids.end());
  bag.feature_ids.erase(
      std::unique(bag.feature_ids.begin(), bag.feature_ids.end()),
      bag.feature_ids.end());
  return bag;
}

}  // namespace hetsup
