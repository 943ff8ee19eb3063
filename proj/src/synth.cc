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

#include "hetsup/synth.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

#include "hetsup/config.h"
#include "hetsup/errors.h"
#include "hetsup/inference.h"
#include "hetsup/model.h"
#include "hetsup/random.h"
#include "json.hpp"

namespace hetsup {
namespace {

enum EntityType { kPerson, kCity, kNumEntityTypes };

struct Relation {
  std::string name;
  EntityType first;
  EntityType second;
  std::vector<std::string> triggers_a;
  std::vector<std::string> triggers_b;
  std::vector<std::string> signature;
};

const std::vector<Relation> &Relations() {
  static const std::vector<Relation> relations = {
      {"born_in", kPerson, kCity,
       {"born", "birth", "birthplace", "natal"},
       {"native", "hometown", "raised", "grew"},
       {"family", "hospital", "childhood"}},
      {"died_in", kPerson, kCity,
       {"died", "death", "perished", "passed"},
       {"deceased", "mourned", "buried", "killed"},
       {"funeral", "illness", "cemetery"}},
      {"lives_in", kPerson, kCity,
       {"lives", "resides", "settled", "dwells"},
       {"resident", "moved", "relocated", "household"},
       {"apartment", "neighborhood", "rent"}},
  };
  return relations;
}

const std::vector<std::string> kNoneTriggers = {"visited", "met", "toured",
                                                "criticized"};
const std::vector<std::string> kNoneUncovered = {"mentioned", "discussed",
                                                 "praised", "ignored"};
const std::vector<std::string> kNoneSignature = {"yesterday", "briefly",
                                                 "reportedly"};
const std::vector<std::string> kFillers = {
    "the", "a",   "was",  "is",   "in",    "of",   "and", "at",
    "on",  "by",  "with", "for",  "that",  "also", "then", "later"};

const char *PosOf(const std::string &word) {
  static const std::map<std::string, const char *> tags = {
      {"the", "DT"}, {"a", "DT"},   {"was", "VBD"}, {"is", "VBZ"},
      {"in", "IN"},  {"of", "IN"},  {"and", "CC"},  {"at", "IN"},
      {"on", "IN"},  {"by", "IN"},  {"with", "IN"}, {"for", "IN"},
      {"that", "WDT"}, {"also", "RB"}, {"then", "RB"}, {"later", "RB"},
      {".", "."}};
  auto it = tags.find(word);
  if (it != tags.end()) return it->second;
  if (word.ends_with("ed")) return "VBN";
  if (word.ends_with("ly")) return "RB";
  return "NN";
}

template <typename T>
const T &Pick(const std::vector<T> &items, Rng &rng) {
  return items[rng.UniformInt(items.size())];
}

using Name = std::vector<std::string>;
using NamePair = std::pair<Name, Name>;

std::string Join(const Name &name) {
  std::string s;
  for (size_t i = 0; i < name.size(); ++i) s += (i ? " " : "") + name[i];
  return s;
}

class NameFactory {
 public:
  explicit NameFactory(Rng &rng) : rng_(rng) {}

  std::string Word() {
    static const std::vector<std::string> onsets = {
        "b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z"};
    static const std::vector<std::string> vowels = {"a", "e", "i", "o", "u"};
    for (;;) {
      std::string w;
      const int syllables = 2 + static_cast<int>(rng_.UniformInt(2));
      for (int s = 0; s < syllables; ++s) {
        w += Pick(onsets, rng_) + Pick(vowels, rng_);
      }
      w[0] = static_cast<char>(std::toupper(w[0]));
      if (used_.insert(w).second) return w;
    }
  }

  std::vector<Name> Pool(EntityType type, int size) {
    std::vector<Name> pool;
    for (int i = 0; i < size; ++i) {
      switch (type) {
        case kPerson: pool.push_back({Word(), Word()}); break;
        default: pool.push_back({Word()}); break;
      }
    }
    return pool;
  }

 private:
  Rng &rng_;
  std::set<std::string> used_;
};

struct Generator {
  explicit Generator(uint64_t seed) : rng(seed) {}

  Rng rng;
  std::vector<std::vector<Name>> pools;
  std::vector<std::vector<NamePair>> kb_relation;

  NamePair RandomPair(const Relation &r) {
    for (;;) {
      NamePair p{Pick(pools[r.first], rng), Pick(pools[r.second], rng)};
      if (p.first != p.second) return p;
    }
  }

  std::vector<NamePair> DistinctPairs(const Relation &r, int n,
                                      std::set<NamePair> &taken) {
    std::vector<NamePair> pairs;
    while (static_cast<int>(pairs.size()) < n) {
      NamePair p = RandomPair(r);
      if (taken.insert(p).second) pairs.push_back(std::move(p));
    }
    return pairs;
  }

  void Filler(std::vector<std::string> &out, int lo, int hi) {
    const int n = lo + static_cast<int>(rng.UniformInt(hi - lo + 1));
    for (int i = 0; i < n; ++i) out.push_back(Pick(kFillers, rng));
  }

  // Two-entity sentence whose between-context holds `cue`, plus a signature
  // word of relation `rel` (or of None when rel < 0) half the time.
  Sentence Make(const std::string &id, int rel,
                const NamePair &pair, const std::vector<std::string> &cue) {
    std::vector<std::string> between;
    Filler(between, 0, 2);
    std::vector<std::string> content = cue;
    if (rng.Bernoulli(0.5)) {
      content.push_back(rel >= 0 ? Pick(Relations()[rel].signature, rng)
                                 : Pick(kNoneSignature, rng));
    }
    rng.Shuffle(content);
    for (const std::string &w : content) {
      between.push_back(w);
      if (rng.Bernoulli(0.4)) between.push_back(Pick(kFillers, rng));
    }
    Filler(between, 0, 1);

    Sentence s;
    s.id = id;
    Filler(s.tokens, 0, 2);
    EntitySpan e1{static_cast<int>(s.tokens.size()), 0, 0};
    for (const auto &w : pair.first) s.tokens.push_back(w);
    e1.end = static_cast<int>(s.tokens.size());
    e1.head = e1.end - 1;
    for (const auto &w : between) s.tokens.push_back(w);
    EntitySpan e2{static_cast<int>(s.tokens.size()), 0, 0};
    for (const auto &w : pair.second) s.tokens.push_back(w);
    e2.end = static_cast<int>(s.tokens.size());
    e2.head = e2.end - 1;
    Filler(s.tokens, 0, 2);
    s.tokens.push_back(".");
    for (const auto &w : s.tokens) s.pos.push_back(PosOf(w));
    for (int i = e1.start; i < e1.end; ++i) s.pos[i] = "NNP";
    for (int i = e2.start; i < e2.end; ++i) s.pos[i] = "NNP";
    s.entities = {e1, e2};
    return s;
  }

  // Appends one sentence and the gold labels of its two mentions.
  void Sample(bool training, int index, Corpus &corpus,
              std::map<int, int> &gold) {
    const auto &relations = Relations();
    const int num_rel = static_cast<int>(relations.size());
    const std::string id = (training ? "train-" : "test-") + std::to_string(index);
    int label = kNoneLabel;
    NamePair pair;
    std::vector<std::string> cue;
    if (rng.Bernoulli(0.6)) {
      const int r = static_cast<int>(rng.UniformInt(num_rel));
      const Relation &rel = relations[r];
      label = r + 1;
      const double u = rng.Uniform();
      if (u < 0.45) {
        cue = {Pick(rel.triggers_a, rng)};
      } else if (u < 0.8) {
        cue = {Pick(rel.triggers_b, rng)};
      } else {
        cue = {Pick(rel.triggers_a, rng), Pick(rel.triggers_b, rng)};
      }
      const double v = rng.Uniform();
      if (v < 0.5) {
        const int other =
            (r + 1 + static_cast<int>(rng.UniformInt(num_rel - 1))) % num_rel;
        pair = Pick(kb_relation[other], rng);
      } else if (v < 0.82) {
        pair = Pick(kb_relation[r], rng);
      } else {
        pair = RandomPair(rel);
      }
      corpus.push_back(Make(id, r, pair, cue));
    } else {
      const int r = static_cast<int>(rng.UniformInt(num_rel));
      cue = {rng.Bernoulli(0.85) ? Pick(kNoneTriggers, rng)
                                 : Pick(kNoneUncovered, rng)};
      const double v = rng.Uniform();
      pair = v < 0.75 ? Pick(kb_relation[r], rng) : RandomPair(relations[r]);
      corpus.push_back(Make(id, -1, pair, cue));
    }
    const int base = static_cast<int>(gold.size());
    gold[base] = label;             // forward: first entity as e1
    gold[base + 1] = kNoneLabel;    // reversed
  }
};

nlohmann::json PatternRecord(const std::string &name,
                             const std::string &relation,
                             const std::vector<std::string> &triggers,
                             const char *order) {
  nlohmann::json j = {{"name", name},
                      {"relation", relation},
                      {"type", "pattern"},
                      {"between_any", triggers}};
  if (order != nullptr) j["order"] = order;
  return j;
}

}  // namespace

SyntheticDataset GenerateSynthetic(const SynthOptions &options) {
  const auto &relations = Relations();
  Generator gen(options.seed);
  NameFactory names(gen.rng);
  const int pool_sizes[kNumEntityTypes] = {400, 160};
  for (int type = 0; type < kNumEntityTypes; ++type) {
    gen.pools.push_back(names.Pool(static_cast<EntityType>(type),
                                   pool_sizes[type]));
  }
  std::set<NamePair> taken;
  for (const Relation &r : relations) {
    gen.kb_relation.push_back(gen.DistinctPairs(r, 300, taken));
  }

  SyntheticDataset data;
  std::vector<std::string> relation_names;
  for (const Relation &r : relations) relation_names.push_back(r.name);
  data.labels = LabelSpace(relation_names);

  for (int i = 0; i < options.train_sentences; ++i) {
    gen.Sample(true, i, data.train, data.train_gold);
  }
  for (int i = 0; i < options.test_sentences; ++i) {
    gen.Sample(false, i, data.test, data.test_gold);
  }

  data.lf_records.push_back(
      nlohmann::json{{"relations", relation_names}}.dump());
  std::vector<std::string> all_triggers;
  for (const Relation &r : relations) {
    data.lf_records.push_back(
        PatternRecord(r.name + "_pattern_a", r.name, r.triggers_a, "e1_first")
            .dump());
    data.lf_records.push_back(
        PatternRecord(r.name + "_pattern_b", r.name, r.triggers_b, "e1_first")
            .dump());
    all_triggers.insert(all_triggers.end(), r.triggers_a.begin(),
                        r.triggers_a.end());
    all_triggers.insert(all_triggers.end(), r.triggers_b.begin(),
                        r.triggers_b.end());
  }
  for (size_t r = 0; r < relations.size(); ++r) {
    const std::string file = "kb_" + relations[r].name + ".tsv";
    data.lf_records.push_back(nlohmann::json{{"name", relations[r].name + "_kb"},
                                             {"relation", relations[r].name},
                                             {"type", "kb"},
                                             {"pairs_file", file}}
                                  .dump());
    for (const NamePair &p : gen.kb_relation[r]) {
      data.kb_files[file].emplace_back(Join(p.first), Join(p.second));
    }
  }
  data.lf_records.push_back(
      PatternRecord("none_context", "None", kNoneTriggers, nullptr).dump());
  data.lf_records.push_back(
      PatternRecord("none_reversed", "None", all_triggers, "e2_first").dump());

  // Trigger and signature words of a relation share a cluster.
  for (size_t r = 0; r < relations.size(); ++r) {
    const std::string bits = "1" + std::string(r + 1, '0') + "1";
    for (const auto *words : {&relations[r].triggers_a,
                              &relations[r].triggers_b}) {
      for (const std::string &w : *words) data.brown.emplace_back(w, bits);
    }
    for (const std::string &w : relations[r].signature) {
      data.brown.emplace_back(w, bits + "0");
    }
  }
  for (const auto *words : {&kNoneTriggers, &kNoneUncovered}) {
    for (const std::string &w : *words) data.brown.emplace_back(w, "01");
  }
  for (const std::string &w : kFillers) data.brown.emplace_back(w, "001");
  return data;
}

void WriteSynthetic(const SyntheticDataset &data, const std::string &dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto open = [&](const std::string &name) {
    std::ofstream out(fs::path(dir) / name);
    if (!out) throw Error("cannot write " + (fs::path(dir) / name).string());
    return out;
  };
  {
    auto out = open("train.jsonl");
    for (const Sentence &s : data.train) WriteSentence(s, out);
  }
  {
    auto out = open("test.jsonl");
    for (const Sentence &s : data.test) WriteSentence(s, out);
  }
  {
    auto out = open("lfs.jsonl");
    for (const std::string &record : data.lf_records) out << record << '\n';
  }
  for (const auto &[name, pairs] : data.kb_files) {
    auto out = open(name);
    for (const auto &[a, b] : pairs) out << a << '\t' << b << '\n';
  }
  {
    auto out = open("train_gold.tsv");
    WriteGold(data.train_gold, data.labels, out);
  }
  {
    auto out = open("test_gold.tsv");
    WriteGold(data.test_gold, data.labels, out);
  }
  {
    auto out = open("brown.tsv");
    for (const auto &[w, bits] : data.brown) out << w << '\t' << bits << '\n';
  }
  {
    auto out = open("config.toml");
    WriteConfig(Hyperparams{}, out);
  }
}

}  // namespace hetsup
