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

#ifndef HETSUP_SUPERVISION_H_
#define HETSUP_SUPERVISION_H_

#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "hetsup/corpus.h"

namespace hetsup {

inline constexpr int kNoneLabel = 0;
inline constexpr std::string_view kNoneName = "None";

// Target relation types plus None. None is always label 0 and the K
// relations occupy labels 1..K.
class LabelSpace {
 public:
  LabelSpace() = default;
  // Throws ConfigError on duplicates, an empty list or a relation named None.
  explicit LabelSpace(std::vector<std::string> relations);

  int num_relations() const { return static_cast<int>(names_.size()) - 1; }
  int size() const { return static_cast<int>(names_.size()); }
  const std::string &name(int label) const { return names_[label]; }
  // Includes None at index 0.
  const std::vector<std::string> &names() const { return names_; }

  std::optional<int> Find(std::string_view name) const;

 private:
  std::vector<std::string> names_{std::string(kNoneName)};
};

enum class MentionOrder { kE1First, kE2First };

struct PatternRule {
  // Lowercase trigger tokens; fires if any occurs between the mentions.
  std::set<std::string> between_any;
  std::optional<int> max_gap;
  std::optional<MentionOrder> required_order;
};

// Ordered (e1 surface, e2 surface) pairs, whitespace-normalized.
using KbPairs = std::set<std::pair<std::string, std::string>>;

struct LabelingFunction {
  int id = 0;
  std::string name;
  int label = kNoneLabel;
  std::variant<PatternRule, KbPairs> rule;

  bool is_pattern() const { return std::holds_alternative<PatternRule>(rule); }
};

struct LabelingFunctionSet {
  LabelSpace labels;
  std::vector<LabelingFunction> functions;
};

// Collapses whitespace runs to a single space and trims.
std::string NormalizeWhitespace(std::string_view text);

// JSON lines, one function per line:
//   {"name":..., "relation":..., "type":"pattern", "between_any":[...],
//    "max_gap":int?, "order":"e1_first"|"e2_first"?}
//   {"name":..., "relation":..., "type":"kb", "pairs_file": path}
// Relative pairs files resolve against base_dir. Ids are dense in file order.
// Throws ConfigError on an unknown relation or empty trigger set.
std::vector<LabelingFunction> ReadLabelingFunctions(
    std::istream &in, const LabelSpace &labels, const std::string &base_dir);
std::vector<LabelingFunction> LoadLabelingFunctions(const std::string &path,
                                                    const LabelSpace &labels);

// Loads a function file together with its label space. The label space comes
// from an optional leading {"relations": [...]} record; without one it is
// the non-None relations in order of first mention.
LabelingFunctionSet LoadLabelingFunctionSet(const std::string &path);

// TSV `e1_text<TAB>e2_text`.
KbPairs ReadKbPairs(std::istream &in);

// The function's label if it fires on the mention, nullopt otherwise.
std::optional<int> ApplyLabelingFunction(const LabelingFunction &lf,
                                         const RelationMention &mention,
                                         const Sentence &sentence);

struct Vote {
  int lf_id = 0;
  int label = kNoneLabel;
  friend bool operator==(const Vote &, const Vote &) = default;
};

struct Annotation {
  int mention_id = 0;
  int lf_id = 0;
  int label = kNoneLabel;
  friend auto operator<=>(const Annotation &, const Annotation &) = default;
};

// Sparse annotations O, sorted by (mention, lf), indexed by mention.
class AnnotationSet {
 public:
  AnnotationSet() = default;
  // Throws ValidationError on a duplicate (mention, lf) pair or a mention id
  // outside [0, num_mentions).
  AnnotationSet(int num_mentions, std::vector<Annotation> entries);

  int num_mentions() const { return static_cast<int>(offsets_.size()) - 1; }
  std::span<const Annotation> entries() const { return entries_; }
  std::span<const Vote> votes(int mention_id) const {
    return std::span<const Vote>(votes_).subspan(
        offsets_[mention_id], offsets_[mention_id + 1] - offsets_[mention_id]);
  }
  bool IsLabeled(int mention_id) const { return !votes(mention_id).empty(); }

  // C_l and C_u, ascending.
  std::vector<int> LabeledMentions() const;
  std::vector<int> UnlabeledMentions() const;

 private:
  std::vector<Annotation> entries_;
  std::vector<Vote> votes_;
  std::vector<size_t> offsets_{0};
};

// Applies every function to every mention.
AnnotationSet Annotate(const Corpus &corpus,
                       std::span<const RelationMention> mentions,
                       std::span<const LabelingFunction> functions);

struct ConflictStats {
  // Mentions with at least one annotation.
  int total = 0;
  // Mentions whose distinct labels are exactly {None}.
  int none_only = 0;
  // Mentions with two or more distinct labels.
  int conflicts = 0;
  // Conflicting mentions where one of the labels is None.
  int conflicts_with_none = 0;
};

ConflictStats ComputeConflictStats(const AnnotationSet &annotations);

// TSV `mention_id<TAB>lf_id<TAB>label-name`.
void WriteAnnotations(const AnnotationSet &annotations,
                      const LabelSpace &labels, std::ostream &out);

// Reads the format written by WriteAnnotations. label_names maps label
// indices to names; it is seeded with None and extended with unseen names.
AnnotationSet ReadAnnotations(std::istream &in,
                              std::vector<std::string> &label_names);

}  // namespace hetsup

#endif  // HETSUP_SUPERVISION_H_
