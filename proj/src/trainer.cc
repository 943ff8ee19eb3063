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

#include "hetsup/trainer.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>

#include "hetsup/errors.h"
#include "hetsup/truth.h"
#include "json.hpp"

namespace hetsup {

NoiseTable::NoiseTable(std::span<const int64_t> counts, double power) {
  cumulative_.reserve(counts.size());
  double total = 0.0;
  for (int64_t c : counts) {
    total += c > 0 ? std::pow(static_cast<double>(c), power) : 0.0;
    cumulative_.push_back(total);
  }
  if (total <= 0) {
    for (size_t i = 0; i < cumulative_.size(); ++i) cumulative_[i] = i + 1.0;
    total = static_cast<double>(cumulative_.size());
  }
  for (double &c : cumulative_) c /= total;
  if (!cumulative_.empty()) cumulative_.back() = 1.0;
}

int NoiseTable::Sample(Rng &rng) const {
  const double u = rng.Uniform();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  return static_cast<int>(
      std::min<size_t>(it - cumulative_.begin(), cumulative_.size() - 1));
}

double NoiseTable::probability(int id) const {
  return id == 0 ? cumulative_[0] : cumulative_[id] - cumulative_[id - 1];
}

SgnsGradients ComputeSgnsGradients(
    std::span<const double> input, std::span<const double> context,
    std::span<const std::span<const double>> negatives) {
  SgnsGradients g;
  const double pos = Dot(input, context);
  g.objective = LogSigmoid(pos);
  const double pos_coef = 1.0 - Sigmoid(pos);
  g.d_input.assign(context.begin(), context.end());
  for (double &x : g.d_input) x *= pos_coef;
  g.d_context.assign(input.begin(), input.end());
  for (double &x : g.d_context) x *= pos_coef;
  for (std::span<const double> neg : negatives) {
    const double score = Dot(input, neg);
    g.objective += LogSigmoid(-score);
    const double neg_coef = -Sigmoid(score);
    Axpy(neg_coef, neg, g.d_input);
    std::vector<double> d_neg(input.begin(), input.end());
    for (double &x : d_neg) x *= neg_coef;
    g.d_negatives.push_back(std::move(d_neg));
  }
  return g;
}

double SgnsStep(int input, int context, ModelParams &params,
                const NoiseTable &noise, int negatives, double rate, Rng &rng) {
  if (input == context) return 0.0;
  std::vector<int> drawn;
  drawn.reserve(negatives);
  for (int k = 0; k < negatives; ++k) {
    const int id = noise.Sample(rng);
    if (id != context) drawn.push_back(id);
  }
  std::vector<std::span<const double>> neg_rows;
  for (int id : drawn) neg_rows.push_back(params.v_star.Row(id));
  const SgnsGradients g = ComputeSgnsGradients(
      params.v.Row(input), params.v_star.Row(context), neg_rows);
  Axpy(rate, g.d_input, params.v.Row(input));
  Axpy(rate, g.d_context, params.v_star.Row(context));
  for (size_t k = 0; k < drawn.size(); ++k) {
    Axpy(rate, g.d_negatives[k], params.v_star.Row(drawn[k]));
  }
  return g.objective;
}

ExtractionGradients ComputeExtractionGradients(std::span<const double> z,
                                               const Matrix &t, int label) {
  ExtractionGradients g;
  const std::vector<double> p = TypeDistribution(z, t);
  // -log p_label through log-sum-exp keeps the loss finite when p underflows.
  const std::vector<double> scores = t.MultiplyVector(z);
  const double max = *std::max_element(scores.begin(), scores.end());
  double sum = 0.0;
  for (double s : scores) sum += std::exp(s - max);
  g.loss = max + std::log(sum) - scores[label];

  g.d_z.assign(z.size(), 0.0);
  g.d_t = Matrix(t.rows(), t.cols());
  for (size_t j = 0; j < t.rows(); ++j) {
    const double coef = p[j] - (static_cast<int>(j) == label ? 1.0 : 0.0);
    Axpy(coef, t.Row(j), g.d_z);
    Axpy(coef, z, g.d_t.Row(j));
  }
  return g;
}

double ExtractionStep(std::span<const double> z, int label, ModelParams &params,
                      double rate, std::vector<double> *d_z) {
  ExtractionGradients g = ComputeExtractionGradients(z, params.t, label);
  Axpy(-rate, g.d_t.data(), params.t.data());
  if (d_z != nullptr) *d_z = std::move(g.d_z);
  return g.loss;
}

MentionGradients ComputeMentionGradients(const MentionForward &forward,
                                         std::span<const double> d_z,
                                         const Matrix &w, size_t bag_size,
                                         const DropoutMask *mask) {
  MentionGradients g;
  std::vector<double> d_pre(d_z.size());
  for (size_t r = 0; r < d_z.size(); ++r) {
    d_pre[r] = d_z[r] * (1.0 - forward.z[r] * forward.z[r]);
  }
  g.d_w = Matrix(w.rows(), w.cols());
  for (size_t r = 0; r < w.rows(); ++r) Axpy(d_pre[r], forward.input, g.d_w.Row(r));
  g.d_feature = w.TransposeMultiplyVector(d_pre);
  const double inv = 1.0 / static_cast<double>(bag_size);
  for (size_t k = 0; k < g.d_feature.size(); ++k) {
    g.d_feature[k] *= inv * (mask != nullptr ? mask->scale[k] : 1.0);
  }
  return g;
}

void BackpropMention(std::span<const int> bag, const MentionForward &forward,
                     std::span<const double> d_z, ModelParams &params,
                     double rate, const DropoutMask *mask) {
  const MentionGradients g =
      ComputeMentionGradients(forward, d_z, params.w, bag.size(), mask);
  Axpy(-rate, g.d_w.data(), params.w.data());
  for (int id : bag) Axpy(-rate, g.d_feature, params.v.Row(id));
}

std::string TrainReport::ToJson() const {
  nlohmann::json epochs_json = nlohmann::json::array();
  for (const EpochStats &e : epochs) {
    epochs_json.push_back({{"epoch", e.epoch},
                           {"mentions", e.mentions},
                           {"extraction_loss", e.extraction_loss},
                           {"embedding_objective", e.embedding_objective},
                           {"truth_log_likelihood", e.truth_log_likelihood}});
  }
  nlohmann::json j = {{"labeled_mentions", labeled_mentions},
                      {"skipped_empty_bags", skipped_empty_bags},
                      {"seconds", seconds},
                      {"epochs", epochs_json}};
  return j.dump();
}

namespace {

void CheckFinite(double value, const char *what, int epoch, int mention) {
  if (!std::isfinite(value)) {
    throw Error(std::string("non-finite ") + what + " at epoch " +
                std::to_string(epoch) + ", mention " + std::to_string(mention));
  }
}

}  // namespace

TrainResult Train(std::span<const FeatureBag> bags,
                  const AnnotationSet &annotations,
                  std::span<const int64_t> feature_counts, int num_labels,
                  int num_lfs, const Hyperparams &hyper, std::ostream *log) {
  hyper.Validate();
  const auto started = std::chrono::steady_clock::now();
  const int num_relations = num_labels - 1;

  TrainResult result;
  TrainReport &report = result.report;
  std::vector<int> train_ids;
  for (int m : annotations.LabeledMentions()) {
    if (static_cast<size_t>(m) < bags.size() && !bags[m].empty()) {
      train_ids.push_back(m);
    } else {
      ++report.skipped_empty_bags;
    }
  }
  report.labeled_mentions = static_cast<int>(train_ids.size());
  if (annotations.LabeledMentions().empty()) {
    throw ConfigError("no annotated mentions to train on");
  }
  if (train_ids.empty()) {
    throw ConfigError("every annotated mention has an empty feature bag");
  }
  if (log != nullptr && report.skipped_empty_bags > 0) {
    *log << "warning: skipped " << report.skipped_empty_bags
         << " annotated mentions with empty feature bags\n";
  }

  Rng rng(hyper.seed);
  ModelParams &params = result.params;
  params = ModelParams::Initialize(
      static_cast<int>(feature_counts.size()), num_lfs, num_labels,
      hyper.dim_v, hyper.dim_z, hyper.ResolvedPhi1(num_relations),
      hyper.ResolvedPhi0(num_relations), rng);
  const NoiseTable noise(feature_counts);

  const double total_steps =
      static_cast<double>(hyper.epochs) * static_cast<double>(train_ids.size());
  double step = 0;
  std::vector<double> d_z;
  for (int epoch = 1; epoch <= hyper.epochs; ++epoch) {
    rng.Shuffle(train_ids);
    EpochStats stats;
    stats.epoch = epoch;
    for (int m : train_ids) {
      const double alpha =
          hyper.linear_decay
              ? hyper.alpha * std::max(1e-4, 1.0 - step / total_steps)
              : hyper.alpha;
      ++step;
      const std::vector<int> &bag = bags[m].feature_ids;

      // Feature co-occurrence embedding.
      double embedding = 0.0;
      if (hyper.lambda1 > 0 && bag.size() >= 2) {
        const int pairs =
            hyper.pair_samples > 0
                ? hyper.pair_samples
                : std::min<int>(2 * static_cast<int>(bag.size()),
                                kMaxPairSamples);
        for (int p = 0; p < pairs; ++p) {
          const size_t i = rng.UniformInt(bag.size());
          size_t j = rng.UniformInt(bag.size() - 1);
          if (j >= i) ++j;
          embedding += SgnsStep(bag[i], bag[j], params, noise,
                                hyper.negatives, alpha * hyper.lambda1, rng);
        }
        CheckFinite(embedding, "embedding objective", epoch, m);
      }

      // Mention representation, true label, extractor and truth model.
      DropoutMask mask;
      const DropoutMask *mask_ptr = nullptr;
      if (hyper.dropout > 0) {
        mask = DropoutMask::Sample(params.dim_v(), hyper.dropout, rng);
        mask_ptr = &mask;
      }
      const MentionForward forward = ForwardMention(bag, params, mask_ptr);
      auto votes = annotations.votes(m);
      const int truth =
          InferTrueLabel(votes, forward.z, params, hyper.candidates);

      const double loss = ExtractionStep(forward.z, truth, params, alpha, &d_z);
      CheckFinite(loss, "extraction loss", epoch, m);
      const TruthGradients tg =
          ComputeTruthGradients(votes, forward.z, params, truth);
      CheckFinite(tg.log_likelihood, "truth log-likelihood", epoch, m);
      if (hyper.lambda2 > 0) {
        for (size_t i = 0; i < votes.size(); ++i) {
          Axpy(alpha * hyper.lambda2, tg.d_l[i], params.l.Row(votes[i].lf_id));
        }
        Axpy(-hyper.lambda2, tg.d_z, d_z);
      }
      BackpropMention(bag, forward, d_z, params, alpha, mask_ptr);

      ++stats.mentions;
      stats.extraction_loss += loss;
      stats.embedding_objective += embedding;
      stats.truth_log_likelihood += tg.log_likelihood;
    }
    if (stats.mentions > 0) {
      stats.extraction_loss /= stats.mentions;
      stats.embedding_objective /= stats.mentions;
      stats.truth_log_likelihood /= stats.mentions;
    }
    report.epochs.push_back(stats);
    if (log != nullptr) {
      *log << "epoch " << epoch << "/" << hyper.epochs
           << " mentions=" << stats.mentions
           << " extraction_loss=" << stats.extraction_loss
           << " embedding_objective=" << stats.embedding_objective
           << " truth_log_likelihood=" << stats.truth_log_likelihood << '\n';
    }
  }

  params.RoundToFloat();
  params.Validate();
  report.seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - started)
                       .count();
  return result;
}

}  // namespace hetsup
