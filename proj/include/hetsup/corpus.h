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

#ifndef HETSUP_CORPUS_H_
#define HETSUP_CORPUS_H_

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hetsup {

// Token span [start, end) with a designated syntactic head.
struct EntitySpan {
  int start = 0;
  int end = 0;
  int head = 0;

  int length() const { return end - start; }
  bool Overlaps(const EntitySpan &other) const {
    return start < other.end && other.start < end;
  }
  friend bool operator==(const EntitySpan &, const EntitySpan &) = default;
};

struct Sentence {
  std::string id;
  std::vector<std::string> tokens;
  std::vector<std::string> pos;
  std::vector<EntitySpan> entities;

  friend bool operator==(const Sentence &, const Sentence &) = default;
};

using Corpus = std::vector<Sentence>;

// Ordered entity pair within one sentence.
struct RelationMention {
  int id = 0;
  // Position of the sentence in the corpus it was generated from.
  int sentence_index = 0;
  std::string sentence_id;
  EntitySpan e1;
  EntitySpan e2;

  friend bool operator==(const RelationMention &,
                         const RelationMention &) = default;
};

// Throws ValidationError if the sentence breaks a span or length invariant.
void ValidateSentence(const Sentence &sentence);

// Parses one JSON-lines record. Unknown fields are ignored.
Sentence ParseSentence(std::string_view json_line, int line_number = 0);

// Reads one sentence per non-blank line, in file order.
Corpus ReadCorpus(std::istream &in);
Corpus LoadCorpus(const std::string &path);

void WriteSentence(const Sentence &sentence, std::ostream &out);

// All ordered pairs of distinct entity spans per sentence, ordered by
// (e1.start, e2.start). Ids run consecutively from 0 across the corpus.
// When max_pairs_per_sentence is set only the first that many pairs of each
// sentence are kept.
std::vector<RelationMention> GenerateMentions(
    const Corpus &corpus, std::optional<int> max_pairs_per_sentence = {});

// TSV: mention_id, sentence_id, e1_start, e1_end, e2_start, e2_end.
void WriteMentions(const std::vector<RelationMention> &mentions,
                   std::ostream &out);

// Entity tokens joined by single spaces.
std::string SurfaceText(const Sentence &sentence, const EntitySpan &span);

}  // namespace hetsup

#endif  // HETSUP_CORPUS_H_
