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

// Acceptance suite: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hetsup/cli.h"
#include "hetsup/model.h"
#include "hetsup/pipeline.h"
#include "hetsup/supervision.h"
#include "hetsup/trainer.h"
#include "hetsup/truth.h"
#include "test_util.h"

namespace hetsup {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;
using testing::CentralDifference;
using testing::FillUniform;
using testing::MaxGradientError;
using testing::RandomVector;
using testing::RelativeError;

constexpr double kGradientTolerance = 1e-4;
constexpr double kGradientSeconds = 10.0;
constexpr double kTruthSeconds = 5.0;
constexpr double kEndToEndSeconds = 120.0;
constexpr double kMinF1 = 0.80;
constexpr double kMinTruthAccuracy = 0.90;
constexpr double kMinMarginOverVote = 0.05;
constexpr double kMinConflictShare = 0.25;
constexpr double kSoftmaxTolerance = 1e-12;
constexpr uint64_t kSynthSeed = 2026;

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void Report(int number, const std::string &name, const Outcome &o) {
  std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << number << " ["
            << name << "]: " << o.detail << std::endl;
  if (!o.pass) ++failures;
}

std::string Fmt(double x) {
  std::ostringstream s;
  s << x;
  return s.str();
}

double CrossEntropy(std::span<const double> z, const Matrix &t, int label) {
  std::vector<double> scores(t.rows());
  for (size_t j = 0; j < t.rows(); ++j) scores[j] = Dot(z, t.Row(j));
  return -std::log(Softmax(scores)[label]);
}

Outcome GradientOracle() {
  const auto start = Clock::now();
  Rng rng(101);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int nv = 1 + static_cast<int>(rng.UniformInt(8));
    const int nz = 1 + static_cast<int>(rng.UniformInt(8));
    const int k = 1 + static_cast<int>(rng.UniformInt(4));
    const int num_votes = 1 + static_cast<int>(rng.UniformInt(4));
    const int num_features = 6;

    ModelParams p;
    p.v = Matrix(num_features, nv);
    p.v_star = Matrix(num_features, nv);
    p.w = Matrix(nz, nv);
    p.l = Matrix(num_votes, nz);
    p.t = Matrix(k + 1, nz);
    for (Matrix *m : {&p.v, &p.v_star, &p.w, &p.l, &p.t}) {
      FillUniform(*m, 1.0, rng);
    }
    p.phi0 = rng.Uniform(0.05, 0.45);
    p.phi1 = rng.Uniform(0.55, 0.95);

    // Feature co-occurrence term.
    {
      auto input = RandomVector(nv, 1.0, rng);
      auto context = RandomVector(nv, 1.0, rng);
      std::vector<std::vector<double>> negatives;
      for (int n = 0; n < 3; ++n) negatives.push_back(RandomVector(nv, 1.0, rng));
      std::vector<std::span<const double>> rows(negatives.begin(),
                                                negatives.end());
      const SgnsGradients g = ComputeSgnsGradients(input, context, rows);
      auto f = [&] {
        double value = LogSigmoid(Dot(input, context));
        for (const auto &n : negatives) value += LogSigmoid(-Dot(input, n));
        return value;
      };
      worst = std::max(worst, MaxGradientError(f, input, g.d_input));
      worst = std::max(worst, MaxGradientError(f, context, g.d_context));
      for (size_t n = 0; n < negatives.size(); ++n) {
        worst = std::max(worst, MaxGradientError(f, negatives[n], g.d_negatives[n]));
      }
    }

    // Truth likelihood with respect to z and l.
    {
      std::vector<Vote> votes;
      for (int i = 0; i < num_votes; ++i) {
        votes.push_back({i, static_cast<int>(rng.UniformInt(k + 1))});
      }
      auto z = RandomVector(nz, 1.0, rng);
      const int truth = votes[rng.UniformInt(votes.size())].label;
      const TruthGradients g = ComputeTruthGradients(votes, z, p, truth);
      auto f = [&] { return LocalLogLikelihood(votes, z, p, truth); };
      worst = std::max(worst, MaxGradientError(f, z, g.d_z));
      for (size_t i = 0; i < votes.size(); ++i) {
        worst = std::max(worst, MaxGradientError(f, p.l.Row(votes[i].lf_id), g.d_l[i]));
      }
    }

    // Cross-entropy with respect to t, z, W and v.
    {
      auto z = RandomVector(nz, 0.9, rng);
      const int label = static_cast<int>(rng.UniformInt(k + 1));
      const ExtractionGradients g = ComputeExtractionGradients(z, p.t, label);
      auto f = [&] { return CrossEntropy(z, p.t, label); };
      worst = std::max(worst, MaxGradientError(f, z, g.d_z));
      worst = std::max(worst, MaxGradientError(f, p.t.data(), g.d_t.data()));

      const std::vector<int> bag = {0, 2, 3};
      const DropoutMask mask = DropoutMask::Sample(nv, 0.5, rng);
      const DropoutMask *m = trial % 2 ? &mask : nullptr;
      const MentionForward forward = ForwardMention(bag, p, m);
      const ExtractionGradients top =
          ComputeExtractionGradients(forward.z, p.t, label);
      const MentionGradients mg =
          ComputeMentionGradients(forward, top.d_z, p.w, bag.size(), m);
      auto full = [&] {
        return CrossEntropy(MentionEmbedding(bag, p, m), p.t, label);
      };
      worst = std::max(worst, MaxGradientError(full, p.w.data(), mg.d_w.data()));
      for (int id : bag) worst = std::max(worst, MaxGradientError(full, p.v.Row(id), mg.d_feature));
    }
  }
  const double seconds = Seconds(start);
  return {worst < kGradientTolerance && seconds < kGradientSeconds,
          "max relative error " + Fmt(worst) + " over 100 instances in " +
              Fmt(seconds) + " s"};
}

// Direct evaluation of the integrated likelihood for one candidate.
double BruteLikelihood(std::span<const Vote> votes, std::span<const double> z,
                       const ModelParams &p, int candidate) {
  double total = 0.0;
  for (const Vote &v : votes) {
    const double s = 1.0 / (1.0 + std::exp(-Dot(z, p.l.Row(v.lf_id))));
    const bool agree = v.label == candidate;
    const double in = agree ? p.phi1 : 1.0 - p.phi1;
    const double out = agree ? p.phi0 : 1.0 - p.phi0;
    total += std::log(s * in + (1.0 - s) * out);
  }
  return total;
}

Outcome TruthOracle() {
  const auto start = Clock::now();
  Rng rng(202);
  int matches = 0, ties = 0;
  const int trials = 1000;
  for (int trial = 0; trial < trials; ++trial) {
    const int nz = 1 + static_cast<int>(rng.UniformInt(8));
    const int k = 1 + static_cast<int>(rng.UniformInt(5));
    const int num_votes = 2 + static_cast<int>(rng.UniformInt(4));
    ModelParams p;
    p.l = Matrix(num_votes, nz);
    p.t = Matrix(k + 1, nz);
    FillUniform(p.l, 2.0, rng);
    std::vector<double> z = RandomVector(nz, 1.0, rng);
    p.phi0 = rng.Uniform(0.05, 0.45);
    p.phi1 = rng.Uniform(0.55, 0.95);
    // Every fifth instance is built to tie: equal phis make each vote count
    // the same, and the votes split evenly.
    const bool tie = trial % 5 == 0;
    if (tie) p.phi1 = p.phi0 = 0.7;
    std::vector<Vote> votes;
    for (int i = 0; i < num_votes; ++i) {
      const int label = tie ? static_cast<int>((i % 2) * k)
                            : static_cast<int>(rng.UniformInt(k + 1));
      votes.push_back({i, label});
    }
    if (tie && num_votes % 2 == 1) votes.pop_back();

    std::set<int> candidates;
    for (const Vote &v : votes) candidates.insert(v.label);
    int best = -1;
    double best_value = -INFINITY;
    for (int c : candidates) {  // ascending; near-equal keeps the smallest
      const double value = BruteLikelihood(votes, z, p, c);
      if (best < 0 ||
          value > best_value + 1e-12 * std::max(1.0, std::abs(best_value))) {
        best = c;
        best_value = value;
      }
    }
    if (tie && candidates.size() > 1) ++ties;
    matches += InferTrueLabel(votes, z, p) == best;
  }
  const double seconds = Seconds(start);
  return {matches == trials && ties > 0 && seconds < kTruthSeconds,
          std::to_string(matches) + "/" + std::to_string(trials) +
              " match brute force (" + std::to_string(ties) +
              " constructed ties) in " + Fmt(seconds) + " s"};
}

Outcome Monotonicity() {
  const std::vector<Vote> votes = {{0, 1}, {1, kNoneLabel}};
  const std::vector<double> z = {1.0};
  constexpr int n = 10;
  auto winner = [&](double s_r, double s_n) {
    ModelParams p;
    p.l = Matrix(2, 1);
    p.l(0, 0) = s_r;
    p.l(1, 0) = s_n;
    p.t = Matrix(2, 1);
    p.phi1 = 0.9;
    p.phi0 = 0.25;
    return InferTrueLabel(votes, z, p);
  };
  auto value = [](int i) { return -4.0 + 8.0 * i / (n - 1); };
  int grid[n][n];
  int relation_cells = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      grid[i][j] = winner(value(i), value(j));
      relation_cells += grid[i][j] == 1;
    }
  }
  // Raising s_r (i up) while lowering s_n (j down) must keep r.
  int reversals = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (grid[i][j] != 1) continue;
      for (int i2 = i; i2 < n; ++i2) {
        for (int j2 = 0; j2 <= j; ++j2) reversals += grid[i2][j2] != 1;
      }
    }
  }
  return {reversals == 0 && relation_cells > 0 && relation_cells < n * n,
          std::to_string(reversals) + " reversals; relation wins " +
              std::to_string(relation_cells) + "/100 cells"};
}

std::string Quote(const std::string &s) { return "'" + s + "'"; }

int Shell(const std::string &command) {
  return std::system(command.c_str());
}

std::string Slurp(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

struct EndToEnd {
  bool ran = false;
  std::string dir;
  std::string model;
};

Outcome SyntheticEndToEnd(EndToEnd &state) {
  const std::string cli = HETSUP_CLI_PATH;
  const fs::path dir = fs::temp_directory_path() / "hetsup_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string d = dir.string();
  state.dir = d;
  state.model = d + "/model.bin";
  auto file = [&](const std::string &name) { return Quote(d + "/" + name); };

  const auto start = Clock::now();
  const std::string quiet = " 2>>" + file("log.txt");
  int rc = Shell(Quote(cli) + " synth --out-dir " + Quote(d) + " --seed " +
                 std::to_string(kSynthSeed) + quiet);
  if (rc == 0) {
    rc = Shell(Quote(cli) + " train --corpus " + file("train.jsonl") +
               " --lfs " + file("lfs.jsonl") + " --config " +
               file("config.toml") + " --brown " + file("brown.tsv") +
               " --model-out " + file("model.bin") + " --truth-out " +
               file("truth.tsv") + " --annotations-out " + file("ann.tsv") +
               " --seed 1 >" + file("train.json") + quiet);
  }
  if (rc == 0) {
    rc = Shell(Quote(cli) + " predict --corpus " + file("test.jsonl") +
               " --model " + file("model.bin") + " --brown " +
               file("brown.tsv") + " --out " + file("pred.tsv") + quiet);
  }
  if (rc == 0) {
    rc = Shell(Quote(cli) + " --json eval --pred " + file("pred.tsv") +
               " --gold " + file("test_gold.tsv") +
               " --mode extraction >" + file("eval.json") + quiet);
  }
  const double seconds = Seconds(start);
  if (rc != 0) return {false, "pipeline command failed, see " + d + "/log.txt"};
  state.ran = true;

  const std::string eval = Slurp(d + "/eval.json");
  const auto at = eval.find("\"f1\":");
  const double f1 = at == std::string::npos ? 0.0 : std::stod(eval.substr(at + 5));

  std::ifstream ann_in(d + "/ann.tsv");
  std::vector<std::string> names;
  const AnnotationSet annotations = ReadAnnotations(ann_in, names);
  std::ifstream gold_in(d + "/train_gold.tsv");
  const std::map<int, int> gold = ReadGold(gold_in, names);
  std::map<int, int> truth;
  {
    std::ifstream in(d + "/truth.tsv");
    std::string line;
    while (std::getline(in, line)) {
      std::istringstream row(line);
      int id;
      std::string label;
      if (!(row >> id >> label)) continue;
      truth[id] = static_cast<int>(
          std::find(names.begin(), names.end(), label) - names.begin());
    }
  }

  int conflicted = 0, truth_right = 0, vote_right = 0;
  for (int m : annotations.LabeledMentions()) {
    const auto votes = annotations.votes(m);
    std::set<int> distinct;
    for (const Vote &v : votes) distinct.insert(v.label);
    if (distinct.size() < 2) continue;
    ++conflicted;
    truth_right += truth.count(m) && truth.at(m) == gold.at(m);
    vote_right += MajorityVote(votes) == gold.at(m);
  }
  std::ifstream test_gold_in(d + "/test_gold.tsv");
  const size_t held_out = ReadGold(test_gold_in, names).size();
  const double total = static_cast<double>(gold.size());
  const double share = conflicted / total;
  const double truth_acc = conflicted ? truth_right / double(conflicted) : 0.0;
  const double vote_acc = conflicted ? vote_right / double(conflicted) : 0.0;

  const Model model = LoadModelFile(state.model);
  bool finite = true;
  for (const Matrix *m : {&model.params.v, &model.params.v_star,
                          &model.params.w, &model.params.l, &model.params.t}) {
    finite = finite && m->AllFinite();
  }
  const bool pass = f1 >= kMinF1 && truth_acc >= kMinTruthAccuracy &&
                    truth_acc - vote_acc >= kMinMarginOverVote &&
                    share >= kMinConflictShare && total >= 5000 && held_out >= 1000 &&
                    seconds < kEndToEndSeconds && finite;
  return {pass, std::to_string(held_out) + " held-out mentions; F1 " + Fmt(f1) + "; conflicted " +
                    std::to_string(conflicted) + "/" + Fmt(total) + " (" +
                    Fmt(share) + "); truth accuracy " + Fmt(truth_acc) +
                    " vs majority vote " + Fmt(vote_acc) + "; " +
                    Fmt(seconds) + " s; parameters finite: " +
                    (finite ? "yes" : "no")};
}

Outcome Determinism(const EndToEnd &state) {
  if (!state.ran) return {false, "end-to-end run unavailable"};
  const std::string cli = HETSUP_CLI_PATH;
  const std::string d = state.dir;
  const std::string again = d + "/model_again.bin";
  const int rc = Shell(Quote(cli) + " train --corpus " + Quote(d + "/train.jsonl") +
                       " --lfs " + Quote(d + "/lfs.jsonl") + " --config " +
                       Quote(d + "/config.toml") + " --brown " +
                       Quote(d + "/brown.tsv") + " --model-out " + Quote(again) +
                       " --seed 1 >/dev/null 2>>" + Quote(d + "/log.txt"));
  if (rc != 0) return {false, "second train run failed"};
  const std::string first = Slurp(state.model);
  const bool identical = !first.empty() && first == Slurp(again);

  const Model loaded = LoadModelFile(state.model);
  std::ostringstream resaved;
  SaveModel(loaded, resaved);
  std::istringstream in(resaved.str());
  const Model reloaded = LoadModel(in);
  const bool round_trip =
      resaved.str() == first && reloaded.params == loaded.params;
  return {identical && round_trip,
          std::string("repeat run ") + (identical ? "bit-identical" : "differs") +
              "; save/load " + (round_trip ? "bit-exact" : "differs")};
}

Outcome Statistics() {
  std::ostringstream out, err;
  const int code = RunCli(
      {"hetsup", "stats", "--annotations", HETSUP_TEST_DATA_DIR "/toy_annotations.tsv"},
      out, err);
  const std::string expected =
      "Total Number of RM\t3\nRM annotated as None\t1\n"
      "RM with conflicts\t1\nConflicts involving None\t1\n";
  std::string shown = out.str();
  std::replace(shown.begin(), shown.end(), '\n', ';');
  std::replace(shown.begin(), shown.end(), '\t', '=');
  return {code == 0 && out.str() == expected, shown};
}

Outcome NumericalHygiene() {
  Rng rng(707);
  double worst = 0.0;
  bool finite = true;
  for (int trial = 0; trial < 10000; ++trial) {
    const int nz = 1 + static_cast<int>(rng.UniformInt(8));
    const int labels = 2 + static_cast<int>(rng.UniformInt(5));
    std::vector<double> z = RandomVector(nz, 1.0, rng);
    Matrix t(labels, nz);
    // Scale so that scores reach magnitude 1e3.
    FillUniform(t, 1e3 / nz, rng);
    if (trial % 2 == 0) {
      for (int j = 0; j < labels; ++j) {
        const double s = Dot(z, t.Row(j));
        const double target = rng.Uniform(-1e3, 1e3);
        const double norm = Dot(z, z);
        for (int c = 0; c < nz; ++c) t(j, c) += (target - s) * z[c] / norm;
      }
    }
    const std::vector<double> p = TypeDistribution(z, t);
    double sum = 0.0;
    for (double x : p) {
      finite = finite && std::isfinite(x);
      sum += x;
    }
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return {finite && worst <= kSoftmaxTolerance,
          "max |sum - 1| = " + Fmt(worst) + " over 10000 inputs; finite: " +
              (finite ? "yes" : "no")};
}

Outcome EntropySweep(const EndToEnd &state) {
  if (!state.ran) return {false, "end-to-end run unavailable"};
  const Model model = LoadModelFile(state.model);
  const Corpus test = LoadCorpus(state.dir + "/test.jsonl");
  const BrownClusters brown = LoadBrownClusters(state.dir + "/brown.tsv");
  std::vector<int> counts;
  std::string shown;
  bool finite = true;
  for (int i = 0; i < 10; ++i) {
    const double eta = 0.15 * i;
    int non_none = 0;
    for (const Prediction &p : PredictCorpus(test, model, &brown, eta)) {
      non_none += p.label != kNoneLabel;
      finite = finite && std::isfinite(p.entropy);
    }
    counts.push_back(non_none);
    shown += (i ? "," : "") + std::to_string(non_none);
  }
  // Read from the largest eta down, counts must be non-increasing.
  bool monotone = true;
  for (size_t i = 1; i < counts.size(); ++i) {
    monotone = monotone && counts[i] >= counts[i - 1];
  }
  return {monotone && finite, "non-None counts for eta 0..1.35: " + shown};
}

}  // namespace
}  // namespace hetsup

int main() {
  using namespace hetsup;
  Report(1, "gradient oracle", GradientOracle());
  Report(2, "truth discovery oracle", TruthOracle());
  Report(3, "context-awareness monotonicity", Monotonicity());
  EndToEnd state;
  Report(4, "synthetic end to end", SyntheticEndToEnd(state));
  Report(5, "determinism", Determinism(state));
  Report(6, "statistics", Statistics());
  Report(7, "numerical hygiene", NumericalHygiene());
  Report(8, "entropy filter monotonicity", EntropySweep(state));
  std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
