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

#include "hetsup/cli.h"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include "CLI11.hpp"
#include "hetsup/config.h"
#include "hetsup/corpus.h"
#include "hetsup/errors.h"
#include "hetsup/features.h"
#include "hetsup/inference.h"
#include "hetsup/model.h"
#include "hetsup/pipeline.h"
#include "hetsup/supervision.h"
#include "hetsup/synth.h"
#include "hetsup/truth.h"
#include "json.hpp"

namespace hetsup {
namespace {

std::ofstream OpenOutput(const std::string &path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open output file: " + path);
  return out;
}

std::ifstream OpenInput(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open input file: " + path);
  return in;
}

std::optional<BrownClusters> MaybeBrown(const std::string &path) {
  if (path.empty()) return std::nullopt;
  return LoadBrownClusters(path);
}

struct AnnotateArgs {
  std::string corpus, lfs, out, mentions_out;
  int max_pairs = 0;
};

struct StatsArgs {
  std::string annotations;
};

// Hyperparameter flags; each overrides the config file only when given.
struct TrainArgs {
  std::string corpus, lfs, config, model_out, brown, truth_out,
      annotations_out, vocab_out;
  Hyperparams flags;
  std::string candidates;
  std::vector<CLI::Option *> hyper_options;
};

struct PredictArgs {
  std::string corpus, model, out, brown, config;
  double eta = 0;
  int max_pairs = 0;
  bool renormalize_entropy = false;
  CLI::Option *eta_option = nullptr;
};

struct EvalArgs {
  std::string pred, gold, mode;
};

struct SynthArgs {
  std::string out_dir;
  SynthOptions options;
};

int RunAnnotate(const AnnotateArgs &a, std::ostream &out, std::ostream &err,
                bool json) {
  const Corpus corpus = LoadCorpus(a.corpus);
  const LabelingFunctionSet lfs = LoadLabelingFunctionSet(a.lfs);
  const auto mentions = GenerateMentions(
      corpus, a.max_pairs > 0 ? std::optional<int>(a.max_pairs) : std::nullopt);
  const AnnotationSet annotations = Annotate(corpus, mentions, lfs.functions);
  auto file = OpenOutput(a.out);
  WriteAnnotations(annotations, lfs.labels, file);
  if (!a.mentions_out.empty()) {
    auto mfile = OpenOutput(a.mentions_out);
    WriteMentions(mentions, mfile);
  }
  const int labeled = static_cast<int>(annotations.LabeledMentions().size());
  err << "annotated " << labeled << " of " << mentions.size()
      << " mentions with " << annotations.entries().size() << " annotations\n";
  if (json) {
    out << nlohmann::json{{"mentions", mentions.size()},
                          {"labeled", labeled},
                          {"annotations", annotations.entries().size()}}
               .dump()
        << '\n';
  }
  return kExitOk;
}

int RunStats(const StatsArgs &a, std::ostream &out, bool json) {
  auto in = OpenInput(a.annotations);
  std::vector<std::string> names;
  const ConflictStats s = ComputeConflictStats(ReadAnnotations(in, names));
  if (json) {
    out << nlohmann::json{{"Total Number of RM", s.total},
                          {"RM annotated as None", s.none_only},
                          {"RM with conflicts", s.conflicts},
                          {"Conflicts involving None", s.conflicts_with_none}}
               .dump()
        << '\n';
  } else {
    out << "Total Number of RM\t" << s.total << '\n'
        << "RM annotated as None\t" << s.none_only << '\n'
        << "RM with conflicts\t" << s.conflicts << '\n'
        << "Conflicts involving None\t" << s.conflicts_with_none << '\n';
  }
  return kExitOk;
}

Hyperparams ResolveHyperparams(const TrainArgs &a) {
  Hyperparams h;
  if (!a.config.empty()) h = LoadConfig(a.config, h);
  const Hyperparams &f = a.flags;
  for (const CLI::Option *opt : a.hyper_options) {
    if (opt->count() == 0) continue;
    const std::string name = opt->get_name(false, true);
    if (name == "--dim-v") h.dim_v = f.dim_v;
    else if (name == "--dim-z") h.dim_z = f.dim_z;
    else if (name == "--lambda1") h.lambda1 = f.lambda1;
    else if (name == "--lambda2") h.lambda2 = f.lambda2;
    else if (name == "--alpha") h.alpha = f.alpha;
    else if (name == "--linear-decay") h.linear_decay = true;
    else if (name == "--negatives") h.negatives = f.negatives;
    else if (name == "--dropout") h.dropout = f.dropout;
    else if (name == "--pair-samples") h.pair_samples = f.pair_samples;
    else if (name == "--epochs") h.epochs = f.epochs;
    else if (name == "--seed") h.seed = f.seed;
    else if (name == "--min-count") h.min_count = f.min_count;
    else if (name == "--phi1") h.phi1 = f.phi1;
    else if (name == "--phi0") h.phi0 = f.phi0;
    else if (name == "--max-pairs") h.max_pairs_per_sentence = f.max_pairs_per_sentence;
    else if (name == "--candidates") ApplyConfigValue(h, "candidates", a.candidates);
  }
  h.Validate();
  return h;
}

int RunTrain(const TrainArgs &a, std::ostream &out, std::ostream &err) {
  const Hyperparams hyper = ResolveHyperparams(a);
  const Corpus corpus = LoadCorpus(a.corpus);
  const LabelingFunctionSet lfs = LoadLabelingFunctionSet(a.lfs);
  const int num_relations = lfs.labels.num_relations();
  if (!(hyper.ResolvedPhi1(num_relations) > hyper.ResolvedPhi0(num_relations))) {
    throw ConfigError(
        "default phi1 and phi0 coincide for a single relation type; set "
        "phi1 > phi0 explicitly");
  }
  const auto brown = MaybeBrown(a.brown);
  TrainingRun run =
      TrainOnCorpus(corpus, lfs, brown ? &*brown : nullptr, hyper, &err);
  SaveModelFile(run.model, a.model_out);
  if (!a.truth_out.empty()) {
    auto f = OpenOutput(a.truth_out);
    WriteTruth(run.truth, lfs.labels, f);
  }
  if (!a.annotations_out.empty()) {
    auto f = OpenOutput(a.annotations_out);
    WriteAnnotations(run.annotations, lfs.labels, f);
  }
  if (!a.vocab_out.empty()) {
    auto f = OpenOutput(a.vocab_out);
    run.model.vocab.Write(f);
  }
  out << run.report.ToJson() << '\n';
  return kExitOk;
}

int RunPredict(const PredictArgs &a, std::ostream &out, std::ostream &err,
               bool json) {
  Hyperparams h;
  if (!a.config.empty()) h = LoadConfig(a.config, h);
  if (a.eta_option->count() > 0) h.eta = a.eta;
  if (a.renormalize_entropy) h.renormalize_entropy = true;
  h.Validate();
  const Corpus corpus = LoadCorpus(a.corpus);
  const Model model = LoadModelFile(a.model);
  const auto brown = MaybeBrown(a.brown);
  const double eta = h.ResolvedEta(model.labels.num_relations());
  const auto predictions = PredictCorpus(
      corpus, model, brown ? &*brown : nullptr, eta, h.renormalize_entropy,
      a.max_pairs > 0 ? std::optional<int>(a.max_pairs) : std::nullopt);
  auto file = OpenOutput(a.out);
  WritePredictions(predictions, model.labels, file);
  const auto non_none = std::count_if(
      predictions.begin(), predictions.end(),
      [](const Prediction &p) { return p.label != kNoneLabel; });
  const double none_share =
      predictions.empty()
          ? 0.0
          : 1.0 - static_cast<double>(non_none) / predictions.size();
  err << "predicted " << predictions.size() << " mentions, eta=" << eta
      << ", None proportion " << none_share << '\n';
  if (json) {
    out << nlohmann::json{{"mentions", predictions.size()},
                          {"non_none", non_none},
                          {"none_proportion", none_share},
                          {"eta", eta}}
               .dump()
        << '\n';
  }
  return kExitOk;
}

int RunEval(const EvalArgs &a, std::ostream &out, std::ostream &err,
            bool json) {
  auto pred_in = OpenInput(a.pred);
  PredictionFile preds = ReadPredictions(pred_in);
  auto gold_in = OpenInput(a.gold);
  std::vector<std::string> names = preds.label_names;
  const std::map<int, int> gold = ReadGold(gold_in, names);

  const bool classification = a.mode == "classification";
  std::map<int, int> predicted;
  for (const Prediction &p : preds.predictions) {
    int label = p.label;
    if (classification) {
      if (p.distribution.size() < 2) {
        throw ValidationError("classification mode needs the distribution "
                              "column for mention " +
                              std::to_string(p.mention_id));
      }
      label = Classify(p.distribution);
    }
    if (!predicted.emplace(p.mention_id, label).second) {
      throw ValidationError("duplicate prediction for mention " +
                            std::to_string(p.mention_id));
    }
  }
  const MetricsReport r = classification
                              ? EvaluateClassification(predicted, gold)
                              : EvaluateExtraction(predicted, gold);
  for (const std::string &w : r.warnings) err << "warning: " << w << '\n';
  if (json) {
    out << r.ToJson(classification) << '\n';
  } else if (classification) {
    out << "accuracy\t" << r.accuracy << '\n'
        << "evaluated\t" << r.evaluated << '\n';
  } else {
    out << "precision\t" << r.precision << '\n'
        << "recall\t" << r.recall << '\n'
        << "f1\t" << r.f1 << '\n';
  }
  return kExitOk;
}

int RunSynth(const SynthArgs &a, std::ostream &out, std::ostream &err,
             bool json) {
  const SyntheticDataset data = GenerateSynthetic(a.options);
  WriteSynthetic(data, a.out_dir);
  err << "wrote " << data.train.size() << " training and "
      << data.test.size() << " test sentences to " << a.out_dir << '\n';
  if (json) {
    out << nlohmann::json{{"train_sentences", data.train.size()},
                          {"test_sentences", data.test.size()},
                          {"train_mentions", data.train_gold.size()},
                          {"test_mentions", data.test_gold.size()}}
               .dump()
        << '\n';
  }
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string> &args, std::ostream &out,
           std::ostream &err) {
  CLI::App app{"Relation extraction from heterogeneous supervision"};
  app.name(args.empty() ? "hetsup" : args[0]);
  app.require_subcommand(1);
  bool json = false;
  app.add_flag("--json", json,
               "Print a single-line JSON summary on standard output");

  AnnotateArgs annotate;
  auto *annotate_cmd =
      app.add_subcommand("annotate", "Apply labeling functions to a corpus");
  annotate_cmd->add_option("--corpus", annotate.corpus, "Corpus (JSON lines)")
      ->required();
  annotate_cmd->add_option("--lfs", annotate.lfs, "Labeling functions")
      ->required();
  annotate_cmd->add_option("--out", annotate.out, "Annotation TSV")
      ->required();
  annotate_cmd->add_option("--mentions-out", annotate.mentions_out,
                           "Optional mention TSV");
  annotate_cmd->add_option("--max-pairs", annotate.max_pairs,
                           "Keep at most this many pairs per sentence");

  StatsArgs stats;
  auto *stats_cmd =
      app.add_subcommand("stats", "Conflict statistics of an annotation file");
  stats_cmd->add_option("--annotations", stats.annotations, "Annotation TSV")
      ->required();

  TrainArgs train;
  auto *train_cmd = app.add_subcommand("train", "Train an extractor");
  train_cmd->add_option("--corpus", train.corpus, "Training corpus")
      ->required();
  train_cmd->add_option("--lfs", train.lfs, "Labeling functions")->required();
  train_cmd->add_option("--config", train.config, "key = value config file");
  train_cmd->add_option("--model-out", train.model_out, "Model file to write")
      ->required();
  train_cmd->add_option("--brown", train.brown, "Brown cluster TSV");
  train_cmd->add_option("--truth-out", train.truth_out,
                        "Write inferred true labels (TSV)");
  train_cmd->add_option("--annotations-out", train.annotations_out,
                        "Write the annotation set (TSV)");
  train_cmd->add_option("--vocab-out", train.vocab_out,
                        "Write the feature vocabulary (TSV)");
  Hyperparams &f = train.flags;
  auto &ho = train.hyper_options;
  ho.push_back(train_cmd->add_option("--seed", f.seed, "Random seed"));
  ho.push_back(train_cmd->add_option("--epochs", f.epochs, "Training epochs"));
  ho.push_back(train_cmd->add_option("--alpha", f.alpha, "Learning rate"));
  ho.push_back(train_cmd->add_option("--linear-decay", f.linear_decay,
                                     "Linearly decay the learning rate")
                   ->expected(0, 1)
                   ->default_str("true"));
  ho.push_back(train_cmd->add_option("--lambda1", f.lambda1,
                                     "Weight of the embedding objective"));
  ho.push_back(train_cmd->add_option("--lambda2", f.lambda2,
                                     "Weight of the truth-discovery objective"));
  ho.push_back(train_cmd->add_option("--negatives", f.negatives,
                                     "Negative samples per feature pair"));
  ho.push_back(train_cmd->add_option("--dropout", f.dropout, "Dropout rate"));
  ho.push_back(train_cmd->add_option("--dim-v", f.dim_v,
                                     "Feature embedding dimension"));
  ho.push_back(train_cmd->add_option("--dim-z", f.dim_z,
                                     "Mention embedding dimension"));
  ho.push_back(train_cmd->add_option("--min-count", f.min_count,
                                     "Minimum feature count"));
  ho.push_back(train_cmd->add_option("--pair-samples", f.pair_samples,
                                     "Feature pairs per mention (0 = auto)"));
  ho.push_back(train_cmd->add_option("--phi1", f.phi1,
                                     "P(correct | in proficient subset)"));
  ho.push_back(train_cmd->add_option("--phi0", f.phi0,
                                     "P(correct | outside proficient subset)"));
  ho.push_back(train_cmd->add_option("--max-pairs", f.max_pairs_per_sentence,
                                     "Keep at most this many pairs per sentence"));
  ho.push_back(train_cmd
                   ->add_option("--candidates", train.candidates,
                                "True-label candidates: annotated or all")
                   ->check(CLI::IsMember({"annotated", "all"})));

  PredictArgs predict;
  auto *predict_cmd =
      app.add_subcommand("predict", "Predict relation types for a corpus");
  predict_cmd->add_option("--corpus", predict.corpus, "Corpus")->required();
  predict_cmd->add_option("--model", predict.model, "Model file")->required();
  predict_cmd->add_option("--out", predict.out, "Predictions TSV")->required();
  predict.eta_option = predict_cmd->add_option(
      "--eta", predict.eta, "Entropy threshold (default 0.8 ln K)");
  predict_cmd->add_option("--config", predict.config,
                          "key = value config file (eta, renormalize_entropy)");
  predict_cmd->add_option("--brown", predict.brown, "Brown cluster TSV");
  predict_cmd->add_option("--max-pairs", predict.max_pairs,
                          "Keep at most this many pairs per sentence");
  predict_cmd->add_flag("--renormalize-entropy", predict.renormalize_entropy,
                        "Renormalize over relation types before the entropy");

  EvalArgs eval;
  auto *eval_cmd = app.add_subcommand("eval", "Score predictions");
  eval_cmd->add_option("--pred", eval.pred, "Predictions TSV")->required();
  eval_cmd->add_option("--gold", eval.gold, "Gold TSV")->required();
  eval_cmd->add_option("--mode", eval.mode, "extraction or classification")
      ->required()
      ->check(CLI::IsMember({"extraction", "classification"}));

  SynthArgs synth;
  auto *synth_cmd =
      app.add_subcommand("synth", "Write a synthetic evaluation dataset");
  synth_cmd->add_option("--out-dir", synth.out_dir, "Output directory")
      ->required();
  synth_cmd->add_option("--seed", synth.options.seed, "Random seed")
      ->required();
  synth_cmd->add_option("--train-sentences", synth.options.train_sentences,
                        "Training sentences (two mentions each)");
  synth_cmd->add_option("--test-sentences", synth.options.test_sentences,
                        "Test sentences (two mentions each)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError &e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*annotate_cmd) return RunAnnotate(annotate, out, err, json);
    if (*stats_cmd) return RunStats(stats, out, json);
    if (*train_cmd) return RunTrain(train, out, err);
    if (*predict_cmd) return RunPredict(predict, out, err, json);
    if (*eval_cmd) return RunEval(eval, out, err, json);
    if (*synth_cmd) return RunSynth(synth, out, err, json);
  } catch (const ConfigError &e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace hetsup
