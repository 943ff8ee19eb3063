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

#include <cmath>
#include <sstream>

#include "doctest.h"
#include "hetsup/errors.h"
#include "hetsup/trainer.h"
#include "test_util.h"

namespace hetsup {
namespace {

using testing::FillUniform;
using testing::kFdTolerance;
using testing::MaxGradientError;
using testing::RandomVector;

double SgnsObjective(std::span<const double> input,
                     std::span<const double> context,
                     const std::vector<std::vector<double>> &negatives) {
  double value = LogSigmoid(Dot(input, context));
  for (const auto &n : negatives) value += LogSigmoid(-Dot(input, n));
  return value;
}

double ExtractionLoss(std::span<const double> z, const Matrix &t, int label) {
  std::vector<double> scores(t.rows());
  for (size_t j = 0; j < t.rows(); ++j) scores[j] = Dot(z, t.Row(j));
  return -std::log(Softmax(scores)[label]);
}

TEST_CASE("noise table follows count to the three quarters") {
  const std::vector<int64_t> counts = {16, 1, 0, 81};
  const NoiseTable table(counts);
  const double total = 8.0 + 1.0 + 0.0 + 27.0;
  CHECK(table.probability(0) == doctest::Approx(8.0 / total));
  CHECK(table.probability(1) == doctest::Approx(1.0 / total));
  CHECK(table.probability(2) == 0.0);
  CHECK(table.probability(3) == doctest::Approx(27.0 / total));
  double sum = 0;
  for (int i = 0; i < 4; ++i) sum += table.probability(i);
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));

  Rng rng(4);
  std::vector<int> hits(4);
  for (int i = 0; i < 36000; ++i) ++hits[table.Sample(rng)];
  CHECK(hits[2] == 0);
  CHECK(hits[3] == doctest::Approx(27000).epsilon(0.05));

  Rng a(9), b(9);
  for (int i = 0; i < 100; ++i) CHECK(table.Sample(a) == table.Sample(b));
}

TEST_CASE("noise table with zero counts is uniform") {
  const std::vector<int64_t> counts = {0, 0};
  CHECK(NoiseTable(counts).probability(1) == doctest::Approx(0.5));
}

TEST_CASE("negative sampling objective at zero") {
  const std::vector<double> zero(4, 0.0);
  const std::vector<std::span<const double>> negatives = {zero};
  const SgnsGradients g = ComputeSgnsGradients(zero, zero, negatives);
  CHECK(g.objective == doctest::Approx(-2 * std::log(2.0)));

  ModelParams p;
  p.v = Matrix(3, 4);
  p.v_star = Matrix(3, 4);
  const std::vector<int64_t> counts = {0, 0, 5};
  const NoiseTable noise(counts);
  Rng rng(1);
  CHECK(SgnsStep(0, 1, p, noise, 1, 0.1, rng) ==
        doctest::Approx(-2 * std::log(2.0)));
  CHECK(SgnsStep(1, 1, p, noise, 1, 0.1, rng) == 0.0);
}

TEST_CASE("negative sampling gradients") {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    auto input = RandomVector(6, 1.0, rng);
    auto context = RandomVector(6, 1.0, rng);
    std::vector<std::vector<double>> negatives = {RandomVector(6, 1.0, rng),
                                                  RandomVector(6, 1.0, rng)};
    std::vector<std::span<const double>> rows(negatives.begin(), negatives.end());
    const SgnsGradients g = ComputeSgnsGradients(input, context, rows);
    auto f = [&] { return SgnsObjective(input, context, negatives); };
    CHECK(g.objective == doctest::Approx(f()));
    CHECK(MaxGradientError(f, input, g.d_input) < kFdTolerance);
    CHECK(MaxGradientError(f, context, g.d_context) < kFdTolerance);
    for (size_t k = 0; k < negatives.size(); ++k) {
      CHECK(MaxGradientError(f, negatives[k], g.d_negatives[k]) < kFdTolerance);
    }
    // Positive term alone: (1 - sigmoid(v . v*)) v*.
    const SgnsGradients pos = ComputeSgnsGradients(input, context, {});
    const double s = Sigmoid(Dot(input, context));
    for (size_t i = 0; i < input.size(); ++i) {
      CHECK(pos.d_input[i] == doctest::Approx((1 - s) * context[i]));
    }
  }
}

TEST_CASE("co-occurring features end up closer") {
  // a and b always appear together, c only next to d.
  Rng rng(2);
  ModelParams p = ModelParams::Initialize(4, 1, 2, 8, 2, 0.75, 0.25, rng);
  const std::vector<int64_t> counts = {100, 100, 100, 100};
  const NoiseTable noise(counts);
  for (int step = 0; step < 2000; ++step) {
    SgnsStep(0, 1, p, noise, 2, 0.05, rng);
    SgnsStep(1, 0, p, noise, 2, 0.05, rng);
    SgnsStep(2, 3, p, noise, 2, 0.05, rng);
    SgnsStep(3, 2, p, noise, 2, 0.05, rng);
  }
  CHECK(Sigmoid(Dot(p.v.Row(0), p.v_star.Row(1))) >
        Sigmoid(Dot(p.v.Row(0), p.v_star.Row(2))));
}

TEST_CASE("extraction loss with zero type vectors") {
  const std::vector<double> z = {0.3, -0.2};
  const Matrix t(4, 2);
  CHECK(ComputeExtractionGradients(z, t, 2).loss ==
        doctest::Approx(std::log(4.0)));
}

TEST_CASE("extraction gradients vanish at the optimum") {
  const std::vector<double> z = {1.0};
  Matrix t(3, 1);
  t(1, 0) = 400.0;
  const ExtractionGradients g = ComputeExtractionGradients(z, t, 1);
  CHECK(g.loss < 1e-12);
  CHECK(std::abs(g.d_z[0]) < 1e-12);
  for (double x : g.d_t.data()) CHECK(std::abs(x) < 1e-12);
}

TEST_CASE("extraction gradients") {
  Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    auto z = RandomVector(5, 1.0, rng);
    Matrix t(4, 5);
    FillUniform(t, 1.5, rng);
    const int label = static_cast<int>(rng.UniformInt(4));
    const ExtractionGradients g = ComputeExtractionGradients(z, t, label);
    auto f = [&] { return ExtractionLoss(z, t, label); };
    CHECK(g.loss == doctest::Approx(f()));
    CHECK(MaxGradientError(f, z, g.d_z) < kFdTolerance);
    CHECK(MaxGradientError(f, t.data(), g.d_t.data()) < kFdTolerance);
  }
}

TEST_CASE("extraction step descends") {
  Rng rng(3);
  ModelParams p = ModelParams::Initialize(1, 1, 3, 2, 4, 0.75, 0.25, rng);
  const std::vector<double> z = {0.5, -0.5, 0.2, 0.1};
  std::vector<double> d_z;
  const double before = ExtractionStep(z, 2, p, 0.5, &d_z);
  CHECK(d_z.size() == 4);
  CHECK(ComputeExtractionGradients(z, p.t, 2).loss < before);
}

TEST_CASE("mention gradients through the full composition") {
  Rng rng(51);
  for (int trial = 0; trial < 20; ++trial) {
    ModelParams p;
    p.v = Matrix(6, 4);
    p.w = Matrix(3, 4);
    FillUniform(p.v, 1.0, rng);
    FillUniform(p.w, 1.0, rng);
    const std::vector<double> target = RandomVector(3, 1.0, rng);
    const std::vector<int> bag = {1, 3, 4};
    const DropoutMask mask = DropoutMask::Sample(4, 0.3, rng);
    const bool use_mask = trial % 2 == 1;
    const DropoutMask *m = use_mask ? &mask : nullptr;
    // L = target . z
    auto f = [&] { return Dot(target, MentionEmbedding(bag, p, m)); };
    const MentionForward forward = ForwardMention(bag, p, m);
    const MentionGradients g =
        ComputeMentionGradients(forward, target, p.w, bag.size(), m);
    CHECK(MaxGradientError(f, p.w.data(), g.d_w.data()) < kFdTolerance);
    for (int id : bag) {
      CHECK(MaxGradientError(f, p.v.Row(id), g.d_feature) < kFdTolerance);
    }
  }
}

TEST_CASE("zero upstream leaves parameters alone") {
  Rng rng(6);
  ModelParams p = ModelParams::Initialize(3, 1, 2, 4, 3, 0.75, 0.25, rng);
  const ModelParams before = p;
  const std::vector<int> bag = {0, 2};
  const MentionForward forward = ForwardMention(bag, p);
  BackpropMention(bag, forward, std::vector<double>(3, 0.0), p, 0.1);
  CHECK(p == before);
}

TEST_CASE("tanh derivative is one at zero") {
  ModelParams p;
  p.v = Matrix(1, 1);
  p.w = Matrix(1, 1, 2.0);
  const std::vector<int> bag = {0};
  const MentionForward forward = ForwardMention(bag, p);
  CHECK(forward.z[0] == 0.0);
  const MentionGradients g = ComputeMentionGradients(
      forward, std::vector<double>{1.0}, p.w, 1);
  CHECK(g.d_feature[0] == 2.0);
}

struct Toy {
  std::vector<FeatureBag> bags;
  AnnotationSet annotations;
  std::vector<int64_t> counts;
};

Toy SingleMention() {
  return {{{0, {0, 1, 2}}}, AnnotationSet(1, {{0, 0, 1}}), {3, 3, 3}};
}

Hyperparams Small() {
  Hyperparams h;
  h.dim_v = 6;
  h.dim_z = 4;
  h.epochs = 5;
  h.phi1 = 0.8;
  h.phi0 = 0.3;
  return h;
}

TEST_CASE("repeated annotation raises its probability each epoch") {
  const Toy toy = SingleMention();
  Hyperparams h = Small();
  h.lambda1 = 0;
  h.lambda2 = 0;
  h.dropout = 0;
  double previous = 0;
  for (int epochs = 1; epochs <= 8; ++epochs) {
    h.epochs = epochs;
    const TrainResult r = Train(toy.bags, toy.annotations, toy.counts, 3, 1, h);
    const auto z = MentionEmbedding(toy.bags[0].feature_ids, r.params);
    const double p1 = TypeDistribution(z, r.params.t)[1];
    CHECK(p1 > previous);
    previous = p1;
  }
}

TEST_CASE("training is deterministic") {
  const Toy toy = SingleMention();
  const TrainResult a = Train(toy.bags, toy.annotations, toy.counts, 3, 1, Small());
  const TrainResult b = Train(toy.bags, toy.annotations, toy.counts, 3, 1, Small());
  CHECK(a.params == b.params);
  Hyperparams other = Small();
  other.seed = 2;
  CHECK_FALSE(Train(toy.bags, toy.annotations, toy.counts, 3, 1, other).params ==
              a.params);
}

TEST_CASE("parameters come back as floats") {
  const Toy toy = SingleMention();
  const TrainResult r = Train(toy.bags, toy.annotations, toy.counts, 3, 1, Small());
  for (double x : r.params.w.data()) {
    CHECK(static_cast<double>(static_cast<float>(x)) == x);
  }
}

TEST_CASE("empty labeled set is a configuration error") {
  const std::vector<FeatureBag> bags = {{0, {0}}};
  const std::vector<int64_t> counts = {1};
  CHECK_THROWS_AS(Train(bags, AnnotationSet(1, {}), counts, 3, 1, Small()),
                  ConfigError);
  const std::vector<FeatureBag> empty = {{0, {}}};
  CHECK_THROWS_AS(
      Train(empty, AnnotationSet(1, {{0, 0, 1}}), counts, 3, 1, Small()),
      ConfigError);
}

TEST_CASE("empty bags are skipped with a warning") {
  const std::vector<FeatureBag> bags = {{0, {0, 1}}, {1, {}}};
  const std::vector<int64_t> counts = {2, 2};
  std::ostringstream log;
  const TrainResult r = Train(bags, AnnotationSet(2, {{0, 0, 1}, {1, 0, 1}}),
                              counts, 3, 1, Small(), &log);
  CHECK(r.report.skipped_empty_bags == 1);
  CHECK(r.report.labeled_mentions == 1);
  CHECK(log.str().find("warning") != std::string::npos);
  CHECK(log.str().find("epoch 5/5") != std::string::npos);
  CHECK(r.report.epochs.size() == 5);
}

TEST_CASE("non-finite loss aborts") {
  const Toy toy = SingleMention();
  Hyperparams h = Small();
  h.alpha = 1e300;
  CHECK_THROWS_AS(Train(toy.bags, toy.annotations, toy.counts, 3, 1, h), Error);
}

TEST_CASE("report json") {
  TrainReport r;
  r.epochs.push_back({1, 10, 0.5, -3.0, -0.2});
  r.labeled_mentions = 10;
  const std::string json = r.ToJson();
  CHECK(json.find('\n') == std::string::npos);
  CHECK(json.find("\"labeled_mentions\":10") != std::string::npos);
  CHECK(r.epochs[0].SupervisedLoss(1.0) == doctest::Approx(0.7));
}

}  // namespace
}  // namespace hetsup
