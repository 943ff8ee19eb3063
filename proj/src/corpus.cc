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

#include "hetsup/corpus.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>

#include "hetsup/errors.h"
#include "json.hpp"

namespace hetsup {

using json = nlohmann::json;

void ValidateSentence(const Sentence &sentence) {
  const int n = static_cast<int>(sentence.tokens.size());
  if (sentence.pos.size() != sentence.tokens.size()) {
    throw ValidationError("sentence '" + sentence.id + "': " +
                          std::to_string(sentence.pos.size()) +
                          " POS tags for " + std::to_string(n) + " tokens");
  }
  const auto &entities = sentence.entities;
  for (size_t i = 0; i < entities.size(); ++i) {
    const EntitySpan &e = entities[i];
    if (e.start < 0 || e.start >= e.end || e.end > n) {
      throw ValidationError("sentence '" + sentence.id + "': entity " +
                            std::to_string(i) + " span [" +
                            std::to_string(e.start) + "," +
                            std::to_string(e.end) + ") out of range");
    }
    if (e.head < e.start || e.head >= e.end) {
      throw ValidationError("sentence '" + sentence.id + "': entity " +
                            std::to_string(i) + " head outside its span");
    }
    for (size_t j = 0; j < i; ++j) {
      if (e.Overlaps(entities[j])) {
        throw ValidationError("sentence '" + sentence.id + "': entities " +
                              std::to_string(j) + " and " + std::to_string(i) +
                              " overlap");
      }
    }
  }
}

Sentence ParseSentence(std::string_view json_line, int line_number) {
  json record;
  try {
    record = json::parse(json_line);
  } catch (const json::parse_error &e) {
    throw ParseError(e.what(), line_number);
  }
  if (!record.is_object()) throw ParseError("expected an object", line_number);

  Sentence sentence;
  try {
    sentence.id = record.at("id").get<std::string>();
    sentence.tokens = record.at("tokens").get<std::vector<std::string>>();
    sentence.pos = record.at("pos").get<std::vector<std::string>>();
    for (const json &e : record.at("entities")) {
      EntitySpan span;
      span.start = e.at("start").get<int>();
      span.end = e.at("end").get<int>();
      span.head = e.at("head").get<int>();
      sentence.entities.push_back(span);
    }
  } catch (const json::exception &e) {
    throw ParseError(e.what(), line_number);
  }
  try {
    ValidateSentence(sentence);
  } catch (const ValidationError &e) {
    if (line_number > 0) {
      throw ValidationError("line " + std::to_string(line_number) + ": " +
                            e.what());
    }
    throw;
  }
  return sentence;
}

Corpus ReadCorpus(std::istream &in) {
  Corpus corpus;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    corpus.push_back(ParseSentence(line, line_number));
  }
  return corpus;
}

Corpus LoadCorpus(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus file: " + path);
  return ReadCorpus(in);
}

void WriteSentence(const Sentence &sentence, std::ostream &out) {
  json entities = json::array();
  for (const EntitySpan &e : sentence.entities) {
    entities.push_back({{"start", e.start}, {"end", e.end}, {"head", e.head}});
  }
  json record = {{"id", sentence.id},
                 {"tokens", sentence.tokens},
                 {"pos", sentence.pos},
                 {"entities", entities}};
  out << record.dump() << '\n';
}

std::vector<RelationMention> GenerateMentions(
    const Corpus &corpus, std::optional<int> max_pairs_per_sentence) {
  std::vector<RelationMention> mentions;
  int next_id = 0;
  for (size_t s = 0; s < corpus.size(); ++s) {
    const Sentence &sentence = corpus[s];
    std::vector<size_t> order(sentence.entities.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      return sentence.entities[a].start < sentence.entities[b].start;
    });
    int emitted = 0;
    for (size_t a : order) {
      for (size_t b : order) {
        if (a == b) continue;
        if (max_pairs_per_sentence && emitted >= *max_pairs_per_sentence) {
          break;
        }
        RelationMention m;
        m.id = next_id++;
        m.sentence_index = static_cast<int>(s);
        m.sentence_id = sentence.id;
        m.e1 = sentence.entities[a];
        m.e2 = sentence.entities[b];
        mentions.push_back(std::move(m));
        ++emitted;
      }
    }
  }
  return mentions;
}

void WriteMentions(const std::vector<RelationMention> &mentions,
                   std::ostream &out) {
  for (const RelationMention &m : mentions) {
    out << m.id << '\t' << m.sentence_id << '\t' << m.e1.start << '\t'
        << m.e1.end << '\t' << m.e2.start << '\t' << m.e2.end << '\n';
  }
}

std::string SurfaceText(const Sentence &sentence, const EntitySpan &span) {
  std::string text;
  for (int i = span.start; i < span.end; ++i) {
    if (i > span.start) text += ' ';
    text += sentence.tokens[i];
  }
  return text;
}

}  // namespace hetsup
