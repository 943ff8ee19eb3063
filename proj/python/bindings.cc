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

// Python bindings for the hetsup library.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hetsup/cli.h"
#include "hetsup/config.h"
#include "hetsup/corpus.h"
#include "hetsup/errors.h"
#include "hetsup/features.h"
#include "hetsup/inference.h"
#include "hetsup/model.h"
#include "hetsup/pipeline.h"
#include "hetsup/supervision.h"
#include "hetsup/synth.h"

namespace py = pybind11;

namespace hetsup {
namespace {

py::object ParseJson(const std::string &text) {
  return py::module_::import("json").attr("loads")(text);
}

std::optional<BrownClusters> MaybeBrown(const std::optional<std::string> &path) {
  if (!path) return std::nullopt;
  return LoadBrownClusters(*path);
}

py::tuple RunCliPy(const std::vector<std::string> &args) {
  std::vector<std::string> argv = {"hetsup"};
  argv.insert(argv.end(), args.begin(), args.end());
  std::ostringstream out, err;
  int code;
  {
    py::gil_scoped_release release;
    code = RunCli(argv, out, err);
  }
  return py::make_tuple(code, out.str(), err.str());
}

py::list LoadCorpusPy(const std::string &path) {
  py::list sentences;
  for (const Sentence &s : LoadCorpus(path)) {
    py::list entities;
    for (const EntitySpan &e : s.entities) {
      entities.append(py::make_tuple(e.start, e.end, e.head));
    }
    py::dict d;
    d["id"] = s.id;
    d["tokens"] = s.tokens;
    d["pos"] = s.pos;
    d["entities"] = entities;
    sentences.append(d);
  }
  return sentences;
}

py::dict ConflictStatsPy(const std::string &annotations_path) {
  std::ifstream in(annotations_path);
  if (!in) throw Error("cannot open " + annotations_path);
  std::vector<std::string> names;
  const ConflictStats s = ComputeConflictStats(ReadAnnotations(in, names));
  py::dict d;
  d["Total Number of RM"] = s.total;
  d["RM annotated as None"] = s.none_only;
  d["RM with conflicts"] = s.conflicts;
  d["Conflicts involving None"] = s.conflicts_with_none;
  return d;
}

py::object TrainPy(const std::string &corpus_path, const std::string &lfs_path,
                   const std::string &model_out,
                   const std::optional<std::string> &brown_path,
                   const std::optional<std::string> &config_path,
                   std::optional<uint64_t> seed, std::optional<int> epochs) {
  Hyperparams h;
  if (config_path) h = LoadConfig(*config_path, h);
  if (seed) h.seed = *seed;
  if (epochs) h.epochs = *epochs;
  h.Validate();
  std::string report;
  {
    py::gil_scoped_release release;
    const Corpus corpus = LoadCorpus(corpus_path);
    const LabelingFunctionSet lfs = LoadLabelingFunctionSet(lfs_path);
    const int k = lfs.labels.num_relations();
    if (!(h.ResolvedPhi1(k) > h.ResolvedPhi0(k))) {
      throw ConfigError("phi1 must exceed phi0");
    }
    const auto brown = MaybeBrown(brown_path);
    TrainingRun run = TrainOnCorpus(corpus, lfs, brown ? &*brown : nullptr, h);
    SaveModelFile(run.model, model_out);
    report = run.report.ToJson();
  }
  return ParseJson(report);
}

py::list PredictPy(const std::string &corpus_path, const std::string &model_path,
                   const std::optional<std::string> &brown_path,
                   std::optional<double> eta, bool renormalize_entropy) {
  const Corpus corpus = LoadCorpus(corpus_path);
  const Model model = LoadModelFile(model_path);
  const auto brown = MaybeBrown(brown_path);
  Hyperparams h;
  h.eta = eta;
  h.Validate();
  const auto predictions =
      PredictCorpus(corpus, model, brown ? &*brown : nullptr,
                    h.ResolvedEta(model.labels.num_relations()),
                    renormalize_entropy);
  py::list rows;
  for (const Prediction &p : predictions) {
    py::dict d;
    d["mention_id"] = p.mention_id;
    d["label"] = model.labels.name(p.label);
    d["entropy"] = p.entropy;
    d["distribution"] = p.distribution;
    d["reason"] = std::string(ReasonName(p.reason));
    rows.append(d);
  }
  return rows;
}

std::vector<double> TypeDistributionPy(
    const std::vector<double> &z, const std::vector<std::vector<double>> &t) {
  Matrix m(t.size(), z.size());
  for (size_t j = 0; j < t.size(); ++j) {
    if (t[j].size() != z.size()) {
      throw py::value_error("every row of t needs len(z) entries");
    }
    for (size_t c = 0; c < z.size(); ++c) m(j, c) = t[j][c];
  }
  return TypeDistribution(z, m);
}

void SynthPy(const std::string &out_dir, uint64_t seed, int train_sentences,
             int test_sentences) {
  SynthOptions options;
  options.seed = seed;
  options.train_sentences = train_sentences;
  options.test_sentences = test_sentences;
  WriteSynthetic(GenerateSynthetic(options), out_dir);
}

}  // namespace
}  // namespace hetsup

PYBIND11_MODULE(_hetsup, m) {
  using namespace hetsup;
  m.doc() = "Relation extraction from heterogeneous supervision.";

  auto base = py::register_exception<Error>(m, "HetsupError");
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

  m.def("run_cli", &RunCliPy, py::arg("args"),
        "Run a command line invocation; returns (exit_code, stdout, stderr).");
  m.def("load_corpus", &LoadCorpusPy, py::arg("path"));
  m.def("conflict_stats", &ConflictStatsPy, py::arg("annotations"));
  m.def("train", &TrainPy, py::arg("corpus"), py::arg("lfs"),
        py::arg("model_out"), py::arg("brown") = py::none(),
        py::arg("config") = py::none(), py::arg("seed") = py::none(),
        py::arg("epochs") = py::none(),
        "Train, save the model and return the training report.");
  m.def("predict", &PredictPy, py::arg("corpus"), py::arg("model"),
        py::arg("brown") = py::none(), py::arg("eta") = py::none(),
        py::arg("renormalize_entropy") = false);
  m.def("type_distribution", &TypeDistributionPy, py::arg("z"), py::arg("t"));
  m.def("entropy_over_relations",
        [](const std::vector<double> &p, bool renormalize) {
          return EntropyOverRelations(p, renormalize);
        },
        py::arg("p"), py::arg("renormalize") = false);
  m.def("synth", &SynthPy, py::arg("out_dir"), py::arg("seed"),
        py::arg("train_sentences") = 2500, py::arg("test_sentences") = 500);
  m.attr("NONE_LABEL") = std::string(kNoneName);
}
