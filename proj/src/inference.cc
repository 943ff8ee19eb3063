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

#include "hetsup/inference.h"

#include <algorithm>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "hetsup/errors.h"
#include "json.hpp"

namespace hetsup {
namespace {

std::vector<std::string> SplitOn(const std::string &s, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(s);
  while (std::getline(in, part, sep)) parts.push_back(part);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

int ParseInt(const std::string &s, int line_number) {
  try {
    size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception &) {
    throw ParseError("bad integer '" + s + "'", line_number);
  }
}

double ParseDouble(const std::string &s, int line_number) {
  try {
    size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception &) {
    throw ParseError("bad number '" + s + "'", line_number);
  }
}

int LabelIndex(const std::string &name, std::vector<std::string> &names) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it != names.end()) return static_cast<int>(it - names.begin());
  names.push_back(name);
  return static_cast<int>(names.size()) - 1;
}

void SeedNone(std::vector<std::string> &names) {
  if (names.empty() || names[0] != kNoneName) {
    names.insert(names.begin(), std::string(kNoneName));
  }
}

void CheckSameKeys(const std::map<int, int> &predicted,
                   const std::map<int, int> &gold) {
  if (predicted.size() != gold.size() ||
      !std::equal(predicted.begin(), predicted.end(), gold.begin(),
                  [](const auto &a, const auto &b) { return a.first == b.first; })) {
    throw ValidationError(
        "predicted and gold files cover different mention ids (" +
        std::to_string(predicted.size()) + " vs " +
        std::to_string(gold.size()) + " mentions)");
  }
}

}  // namespace

std::string_view ReasonName(NoneReason reason) {
  switch (reason) {
    case NoneReason::kNotNone: return "not-none";
    case NoneReason::kClassifier: return "classifier";
    case NoneReason::kEntropy: return "entropy";
  }
  return "unknown";
}

Prediction PredictFromDistribution(int mention_id,
                                   std::vector<double> distribution, double eta,
                                   bool renormalize_entropy) {
  Prediction p;
  p.mention_id = mention_id;
  p.entropy = EntropyOverRelations(distribution, renormalize_entropy);
  const int argmax = static_cast<int>(
      std::max_element(distribution.begin(), distribution.end()) -
      distribution.begin());
  if (argmax == kNoneLabel) {
    p.label = kNoneLabel;
    p.reason = NoneReason::kClassifier;
  } else if (p.entropy > eta) {
    p.label = kNoneLabel;
    p.reason = NoneReason::kEntropy;
  } else {
    p.label = argmax;
    p.reason = NoneReason::kNotNone;
  }
  p.distribution = std::move(distribution);
  return p;
}

Prediction Predict(const FeatureBag &bag, const ModelParams &params,
                   double eta, bool renormalize_entropy) {
  if (bag.empty()) {
    const std::vector<double> zero(params.dim_z(), 0.0);
    Prediction p = PredictFromDistribution(
        bag.mention_id, TypeDistribution(zero, params.t), eta,
        renormalize_entropy);
    p.label = kNoneLabel;
    p.reason = NoneReason::kClassifier;
    return p;
  }
  return PredictFromDistribution(
      bag.mention_id,
      TypeDistribution(MentionEmbedding(bag.feature_ids, params), params.t),
      eta, renormalize_entropy);
}

int Classify(std::span<const double> distribution) {
  int best = 1;
  for (int j = 2; j < static_cast<int>(distribution.size()); ++j) {
    if (distribution[j] > distribution[best]) best = j;
  }
  return best;
}

int Classify(const FeatureBag &bag, const ModelParams &params) {
  std::vector<double> z(params.dim_z(), 0.0);
  if (!bag.empty()) z = MentionEmbedding(bag.feature_ids, params);
  return Classify(TypeDistribution(z, params.t));
}

std::string MetricsReport::ToJson(bool classification) const {
  nlohmann::json j;
  if (classification) {
    j = {{"mode", "classification"},
         {"accuracy", accuracy},
         {"evaluated", evaluated},
         {"correct", correct}};
  } else {
    j = {{"mode", "extraction"},
         {"precision", precision},
         {"recall", recall},
         {"f1", f1},
         {"gold_non_none", gold_non_none},
         {"predicted_non_none", predicted_non_none},
         {"correct_non_none", correct_non_none}};
  }
  return j.dump();
}

MetricsReport EvaluateExtraction(const std::map<int, int> &predicted,
                                 const std::map<int, int> &gold) {
  CheckSameKeys(predicted, gold);
  MetricsReport r;
  for (const auto &[id, label] : predicted) {
    const int truth = gold.at(id);
    if (label != kNoneLabel) ++r.predicted_non_none;
    if (truth != kNoneLabel) ++r.gold_non_none;
    if (label != kNoneLabel && label == truth) ++r.correct_non_none;
  }
  if (r.predicted_non_none > 0) {
    r.precision = static_cast<double>(r.correct_non_none) / r.predicted_non_none;
  } else {
    r.warnings.push_back("no non-None predictions; precision set to 0");
  }
  if (r.gold_non_none > 0) {
    r.recall = static_cast<double>(r.correct_non_none) / r.gold_non_none;
  } else {
    r.warnings.push_back("no non-None gold labels; recall set to 0");
  }
  if (r.precision + r.recall > 0) {
    r.f1 = 2 * r.precision * r.recall / (r.precision + r.recall);
  }
  return r;
}

MetricsReport EvaluateClassification(const std::map<int, int> &predicted,
                                     const std::map<int, int> &gold) {
  CheckSameKeys(predicted, gold);
  MetricsReport r;
  for (const auto &[id, truth] : gold) {
    if (truth == kNoneLabel) continue;
    ++r.evaluated;
    if (predicted.at(id) == truth) ++r.correct;
  }
  if (r.evaluated > 0) {
    r.accuracy = static_cast<double>(r.correct) / r.evaluated;
  } else {
    r.warnings.push_back("no non-None gold labels; accuracy set to 0");
  }
  return r;
}

void WritePredictions(std::span<const Prediction> predictions,
                      const LabelSpace &labels, std::ostream &out) {
  out << "#mention_id\tlabel\treason\tentropy\t";
  for (int j = 0; j < labels.size(); ++j) {
    out << (j > 0 ? "," : "") << labels.name(j);
  }
  out << '\n';
  const auto old_precision = out.precision();
  out.precision(std::numeric_limits<double>::max_digits10);
  for (const Prediction &p : predictions) {
    out << p.mention_id << '\t' << labels.name(p.label) << '\t'
        << ReasonName(p.reason) << '\t' << p.entropy << '\t';
    for (size_t j = 0; j < p.distribution.size(); ++j) {
      out << (j > 0 ? "," : "") << p.distribution[j];
    }
    out << '\n';
  }
  out.precision(old_precision);
}

PredictionFile ReadPredictions(std::istream &in) {
  PredictionFile file;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto fields = SplitOn(line, '\t');
      if (file.label_names.empty() && fields.size() >= 5) {
        file.label_names = SplitOn(fields[4], ',');
      }
      continue;
    }
    SeedNone(file.label_names);
    const auto fields = SplitOn(line, '\t');
    if (fields.size() < 2) {
      throw ParseError("expected at least mention_id<TAB>label", line_number);
    }
    Prediction p;
    p.mention_id = ParseInt(fields[0], line_number);
    p.label = LabelIndex(fields[1], file.label_names);
    p.reason = p.label == kNoneLabel ? NoneReason::kClassifier
                                     : NoneReason::kNotNone;
    if (fields.size() >= 3) {
      if (fields[2] == "entropy") p.reason = NoneReason::kEntropy;
      else if (fields[2] == "classifier") p.reason = NoneReason::kClassifier;
      else if (fields[2] == "not-none") p.reason = NoneReason::kNotNone;
      else throw ParseError("unknown reason '" + fields[2] + "'", line_number);
    }
    if (fields.size() >= 4) p.entropy = ParseDouble(fields[3], line_number);
    if (fields.size() >= 5 && !fields[4].empty()) {
      for (const std::string &x : SplitOn(fields[4], ',')) {
        p.distribution.push_back(ParseDouble(x, line_number));
      }
    }
    file.predictions.push_back(std::move(p));
  }
  SeedNone(file.label_names);
  return file;
}

std::map<int, int> ReadGold(std::istream &in,
                            std::vector<std::string> &label_names) {
  SeedNone(label_names);
  std::map<int, int> gold;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto fields = SplitOn(line, '\t');
    if (fields.size() != 2) {
      throw ParseError("expected mention_id<TAB>label", line_number);
    }
    const int id = ParseInt(fields[0], line_number);
    if (!gold.emplace(id, LabelIndex(fields[1], label_names)).second) {
      throw ParseError("duplicate mention id " + fields[0], line_number);
    }
  }
  return gold;
}

void WriteGold(const std::map<int, int> &gold, const LabelSpace &labels,
               std::ostream &out) {
  for (const auto &[id, label] : gold) {
    out << id << '\t' << labels.name(label) << '\n';
  }
}

}  // namespace hetsup
