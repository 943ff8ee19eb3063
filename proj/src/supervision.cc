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

#include "hetsup/supervision.h"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "hetsup/errors.h"
#include "json.hpp"

namespace hetsup {
namespace {

using json = nlohmann::json;

std::string Lowercase(std::string_view s) {
  std::string out(s);
  for (char &c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

json ParseRecord(const std::string &line, int line_number) {
  try {
    json record = json::parse(line);
    if (!record.is_object()) throw ParseError("expected an object", line_number);
    return record;
  } catch (const json::parse_error &e) {
    throw ParseError(e.what(), line_number);
  }
}

bool IsBlank(const std::string &line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

LabelingFunction ParseFunction(const json &record, const LabelSpace &labels,
                               const std::filesystem::path &base_dir,
                               int id, int line_number) {
  auto where = [&](const std::string &msg) {
    return "labeling function on line " + std::to_string(line_number) + ": " +
           msg;
  };
  LabelingFunction lf;
  lf.id = id;
  try {
    lf.name = record.value("name", "lf" + std::to_string(id));
    const std::string relation = record.at("relation").get<std::string>();
    auto label = labels.Find(relation);
    if (!label) throw ConfigError(where("unknown relation '" + relation + "'"));
    lf.label = *label;

    const std::string type = record.at("type").get<std::string>();
    if (type == "pattern") {
      PatternRule rule;
      for (const auto &t : record.at("between_any")) {
        rule.between_any.insert(Lowercase(t.get<std::string>()));
      }
      if (rule.between_any.empty()) {
        throw ConfigError(where("empty between_any trigger set"));
      }
      if (record.contains("max_gap") && !record["max_gap"].is_null()) {
        rule.max_gap = record["max_gap"].get<int>();
      }
      if (record.contains("order") && !record["order"].is_null()) {
        const std::string order = record["order"].get<std::string>();
        if (order == "e1_first") {
          rule.required_order = MentionOrder::kE1First;
        } else if (order == "e2_first") {
          rule.required_order = MentionOrder::kE2First;
        } else {
          throw ConfigError(where("order must be e1_first or e2_first"));
        }
      }
      lf.rule = std::move(rule);
    } else if (type == "kb") {
      std::filesystem::path pairs_path =
          record.at("pairs_file").get<std::string>();
      if (pairs_path.is_relative()) pairs_path = base_dir / pairs_path;
      std::ifstream in(pairs_path);
      if (!in) throw ConfigError(where("cannot open " + pairs_path.string()));
      lf.rule = ReadKbPairs(in);
    } else {
      throw ConfigError(where("unknown type '" + type + "'"));
    }
  } catch (const json::exception &e) {
    throw ConfigError(where(e.what()));
  }
  return lf;
}

}  // namespace

LabelSpace::LabelSpace(std::vector<std::string> relations) {
  if (relations.empty()) throw ConfigError("label space needs a relation");
  for (std::string &r : relations) {
    if (r == kNoneName) throw ConfigError("relation may not be named None");
    if (Find(r)) throw ConfigError("duplicate relation '" + r + "'");
    names_.push_back(std::move(r));
  }
}

std::optional<int> LabelSpace::Find(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<int>(it - names_.begin());
}

std::string NormalizeWhitespace(std::string_view text) {
  std::string out;
  bool pending_space = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += c;
  }
  return out;
}

KbPairs ReadKbPairs(std::istream &in) {
  KbPairs pairs;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (IsBlank(line)) continue;
    const size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError("expected e1_text<TAB>e2_text", line_number);
    }
    pairs.emplace(NormalizeWhitespace(line.substr(0, tab)),
                  NormalizeWhitespace(line.substr(tab + 1)));
  }
  return pairs;
}

std::vector<LabelingFunction> ReadLabelingFunctions(
    std::istream &in, const LabelSpace &labels, const std::string &base_dir) {
  std::vector<LabelingFunction> functions;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (IsBlank(line)) continue;
    json record = ParseRecord(line, line_number);
    if (record.contains("relations")) continue;
    functions.push_back(ParseFunction(record, labels, base_dir,
                                      static_cast<int>(functions.size()),
                                      line_number));
  }
  return functions;
}

std::vector<LabelingFunction> LoadLabelingFunctions(const std::string &path,
                                                    const LabelSpace &labels) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open labeling function file: " + path);
  return ReadLabelingFunctions(
      in, labels, std::filesystem::path(path).parent_path().string());
}

LabelingFunctionSet LoadLabelingFunctionSet(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open labeling function file: " + path);
  std::vector<std::string> relations;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (IsBlank(line)) continue;
    json record = ParseRecord(line, line_number);
    if (record.contains("relations")) {
      relations = record["relations"].get<std::vector<std::string>>();
      break;
    }
    if (!record.contains("relation") || !record["relation"].is_string()) {
      throw ConfigError("labeling function on line " +
                        std::to_string(line_number) + ": missing relation");
    }
    const std::string r = record["relation"].get<std::string>();
    if (r != kNoneName &&
        std::find(relations.begin(), relations.end(), r) == relations.end()) {
      relations.push_back(r);
    }
  }
  LabelingFunctionSet set{LabelSpace(std::move(relations)), {}};
  set.functions = LoadLabelingFunctions(path, set.labels);
  return set;
}

std::optional<int> ApplyLabelingFunction(const LabelingFunction &lf,
                                         const RelationMention &mention,
                                         const Sentence &sentence) {
  if (const auto *rule = std::get_if<PatternRule>(&lf.rule)) {
    const bool e1_first = mention.e1.start < mention.e2.start;
    if (rule->required_order) {
      const bool want_e1_first =
          *rule->required_order == MentionOrder::kE1First;
      if (want_e1_first != e1_first) return std::nullopt;
    }
    const EntitySpan &left = e1_first ? mention.e1 : mention.e2;
    const EntitySpan &right = e1_first ? mention.e2 : mention.e1;
    const int gap = std::max(0, right.start - left.end);
    if (rule->max_gap && gap > *rule->max_gap) return std::nullopt;
    for (int i = left.end; i < right.start; ++i) {
      if (rule->between_any.contains(Lowercase(sentence.tokens[i]))) {
        return lf.label;
      }
    }
    return std::nullopt;
  }
  const auto &pairs = std::get<KbPairs>(lf.rule);
  std::pair<std::string, std::string> key{
      NormalizeWhitespace(SurfaceText(sentence, mention.e1)),
      NormalizeWhitespace(SurfaceText(sentence, mention.e2))};
  if (pairs.contains(key)) return lf.label;
  return std::nullopt;
}

AnnotationSet::AnnotationSet(int num_mentions, std::vector<Annotation> entries)
    : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end());
  offsets_.assign(num_mentions + 1, 0);
  for (size_t i = 0; i < entries_.size(); ++i) {
    const Annotation &a = entries_[i];
    if (a.mention_id < 0 || a.mention_id >= num_mentions) {
      throw ValidationError("annotation for unknown mention " +
                            std::to_string(a.mention_id));
    }
    if (i > 0 && entries_[i - 1].mention_id == a.mention_id &&
        entries_[i - 1].lf_id == a.lf_id) {
      throw ValidationError("duplicate annotation for mention " +
                            std::to_string(a.mention_id) + " by function " +
                            std::to_string(a.lf_id));
    }
    ++offsets_[a.mention_id + 1];
    votes_.push_back({a.lf_id, a.label});
  }
  for (int m = 0; m < num_mentions; ++m) offsets_[m + 1] += offsets_[m];
}

std::vector<int> AnnotationSet::LabeledMentions() const {
  std::vector<int> ids;
  for (int m = 0; m < num_mentions(); ++m) {
    if (IsLabeled(m)) ids.push_back(m);
  }
  return ids;
}

std::vector<int> AnnotationSet::UnlabeledMentions() const {
  std::vector<int> ids;
  for (int m = 0; m < num_mentions(); ++m) {
    if (!IsLabeled(m)) ids.push_back(m);
  }
  return ids;
}

AnnotationSet Annotate(const Corpus &corpus,
                       std::span<const RelationMention> mentions,
                       std::span<const LabelingFunction> functions) {
  std::vector<Annotation> entries;
  for (const RelationMention &m : mentions) {
    const Sentence &sentence = corpus.at(m.sentence_index);
    for (const LabelingFunction &lf : functions) {
      if (auto label = ApplyLabelingFunction(lf, m, sentence)) {
        entries.push_back({m.id, lf.id, *label});
      }
    }
  }
  return AnnotationSet(static_cast<int>(mentions.size()), std::move(entries));
}

ConflictStats ComputeConflictStats(const AnnotationSet &annotations) {
  ConflictStats stats;
  std::vector<int> distinct;
  for (int m = 0; m < annotations.num_mentions(); ++m) {
    auto votes = annotations.votes(m);
    if (votes.empty()) continue;
    distinct.clear();
    for (const Vote &v : votes) distinct.push_back(v.label);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()),
                   distinct.end());
    ++stats.total;
    if (distinct.size() == 1 && distinct[0] == kNoneLabel) ++stats.none_only;
    if (distinct.size() >= 2) {
      ++stats.conflicts;
      if (distinct[0] == kNoneLabel) ++stats.conflicts_with_none;
    }
  }
  return stats;
}

void WriteAnnotations(const AnnotationSet &annotations,
                      const LabelSpace &labels, std::ostream &out) {
  for (const Annotation &a : annotations.entries()) {
    out << a.mention_id << '\t' << a.lf_id << '\t' << labels.name(a.label)
        << '\n';
  }
}

AnnotationSet ReadAnnotations(std::istream &in,
                              std::vector<std::string> &label_names) {
  if (label_names.empty() || label_names[0] != kNoneName) {
    label_names.insert(label_names.begin(), std::string(kNoneName));
  }
  std::unordered_map<std::string, int> index;
  for (size_t i = 0; i < label_names.size(); ++i) {
    index.emplace(label_names[i], static_cast<int>(i));
  }
  std::vector<Annotation> entries;
  int max_mention = -1;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (IsBlank(line) || line[0] == '#') continue;
    const size_t t1 = line.find('\t');
    const size_t t2 =
        t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) {
      throw ParseError("expected mention_id<TAB>lf_id<TAB>label", line_number);
    }
    Annotation a;
    try {
      size_t used = 0;
      a.mention_id = std::stoi(line.substr(0, t1), &used);
      if (used != t1) throw std::invalid_argument("trailing characters");
      const std::string lf_field = line.substr(t1 + 1, t2 - t1 - 1);
      a.lf_id = std::stoi(lf_field, &used);
      if (used != lf_field.size()) {
        throw std::invalid_argument("trailing characters");
      }
    } catch (const std::exception &) {
      throw ParseError("bad integer field", line_number);
    }
    if (a.mention_id < 0 || a.lf_id < 0) {
      throw ParseError("negative id", line_number);
    }
    const std::string name = line.substr(t2 + 1);
    auto [it, inserted] =
        index.try_emplace(name, static_cast<int>(label_names.size()));
    if (inserted) label_names.push_back(name);
    a.label = it->second;
    max_mention = std::max(max_mention, a.mention_id);
    entries.push_back(a);
  }
  return AnnotationSet(max_mention + 1, std::move(entries));
}

}  // namespace hetsup
