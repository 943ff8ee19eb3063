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

#include "hetsup/model.h"

#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "hetsup/errors.h"

namespace hetsup {
namespace {

constexpr char kMagic[5] = {'R', 'E', 'H', 'S', '1'};

void FillUniform(Matrix &m, double bound, Rng &rng) {
  for (double &x : m.data()) x = rng.Uniform(-bound, bound);
}

void RoundMatrix(Matrix &m) {
  for (double &x : m.data()) x = static_cast<double>(static_cast<float>(x));
}

class Writer {
 public:
  explicit Writer(std::ostream &out) : out_(out) {}

  void U32(uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out_.write(b, 4);
  }
  void U64(uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out_.write(b, 8);
  }
  void F32(double v) { U32(std::bit_cast<uint32_t>(static_cast<float>(v))); }
  void F64(double v) { U64(std::bit_cast<uint64_t>(v)); }
  void String(const std::string &s) {
    U32(static_cast<uint32_t>(s.size()));
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }
  void Array(const Matrix &m) {
    for (double x : m.data()) F32(x);
  }

 private:
  std::ostream &out_;
};

class Reader {
 public:
  explicit Reader(std::istream &in) : in_(in) {}

  void Bytes(char *dst, size_t n) {
    in_.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<size_t>(in_.gcount()) != n) {
      throw ParseError("truncated model file", 0);
    }
  }
  uint32_t U32() {
    unsigned char b[4];
    Bytes(reinterpret_cast<char *>(b), 4);
    uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
    return v;
  }
  uint64_t U64() {
    unsigned char b[8];
    Bytes(reinterpret_cast<char *>(b), 8);
    uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
  }
  double F32() { return static_cast<double>(std::bit_cast<float>(U32())); }
  double F64() { return std::bit_cast<double>(U64()); }
  std::string String() {
    const uint32_t n = U32();
    std::string s(n, '\0');
    Bytes(s.data(), n);
    return s;
  }
  Matrix Array(size_t rows, size_t cols) {
    Matrix m(rows, cols);
    for (double &x : m.data()) x = F32();
    return m;
  }

 private:
  std::istream &in_;
};

}  // namespace

void Hyperparams::Validate() const {
  auto fail = [](const std::string &msg) { throw ConfigError(msg); };
  if (dim_v < 1 || dim_z < 1) fail("dim_v and dim_z must be positive");
  if (!(alpha > 0)) fail("alpha must be positive");
  if (!(lambda1 >= 0) || !(lambda2 >= 0)) fail("lambdas must be nonnegative");
  if (negatives < 1) fail("negatives must be at least 1");
  if (!(dropout >= 0 && dropout < 1)) fail("dropout must be in [0, 1)");
  if (pair_samples < 0) fail("pair_samples must be nonnegative");
  if (epochs < 0) fail("epochs must be nonnegative");
  if (min_count < 1) fail("min_count must be at least 1");
  if (eta && !(*eta >= 0)) fail("eta must be nonnegative");
  if (phi0 && !(*phi0 > 0 && *phi0 < 1)) fail("phi0 must be in (0, 1)");
  if (phi1 && !(*phi1 > 0 && *phi1 < 1)) fail("phi1 must be in (0, 1)");
  if (max_pairs_per_sentence && *max_pairs_per_sentence < 0) {
    fail("max_pairs_per_sentence must be nonnegative");
  }
}

double Hyperparams::ResolvedPhi0(int num_relations) const {
  return phi0 ? *phi0 : 1.0 / (num_relations + 1);
}

double Hyperparams::ResolvedPhi1(int num_relations) const {
  return phi1 ? *phi1 : 1.0 - 1.0 / (num_relations + 1);
}

double Hyperparams::ResolvedEta(int num_relations) const {
  return eta ? *eta : 0.8 * std::log(static_cast<double>(num_relations));
}

ModelParams ModelParams::Initialize(int num_features, int num_lfs,
                                    int num_labels, int dim_v, int dim_z,
                                    double phi1, double phi0, Rng &rng) {
  ModelParams p;
  p.v = Matrix(num_features, dim_v);
  p.v_star = Matrix(num_features, dim_v);
  p.w = Matrix(dim_z, dim_v);
  p.l = Matrix(num_lfs, dim_z);
  p.t = Matrix(num_labels, dim_z);
  const double feature_bound = 0.5 / dim_v;
  const double bound = 1.0 / std::sqrt(static_cast<double>(dim_z));
  FillUniform(p.v, feature_bound, rng);
  FillUniform(p.v_star, feature_bound, rng);
  FillUniform(p.w, bound, rng);
  FillUniform(p.l, bound, rng);
  FillUniform(p.t, bound, rng);
  p.phi1 = phi1;
  p.phi0 = phi0;
  p.Validate();
  return p;
}

void ModelParams::RoundToFloat() {
  for (Matrix *m : {&v, &v_star, &w, &l, &t}) RoundMatrix(*m);
}

void ModelParams::Validate() const {
  if (v_star.rows() != v.rows() || v_star.cols() != v.cols() ||
      v.cols() != w.cols() || l.cols() != w.rows() || t.cols() != w.rows()) {
    throw ValidationError("parameter shapes disagree");
  }
  for (const Matrix *m : {&v, &v_star, &w, &l, &t}) {
    if (!m->AllFinite()) throw ValidationError("non-finite parameter");
  }
  if (!(phi0 > 0 && phi1 < 1 && phi1 > phi0)) {
    throw ValidationError("need 0 < phi0 < phi1 < 1, got phi1=" +
                          std::to_string(phi1) +
                          " phi0=" + std::to_string(phi0));
  }
}

DropoutMask DropoutMask::Sample(int dim, double p, Rng &rng) {
  DropoutMask mask;
  mask.scale.resize(dim);
  const double keep_scale = 1.0 / (1.0 - p);
  for (double &s : mask.scale) s = rng.Bernoulli(p) ? 0.0 : keep_scale;
  return mask;
}

DropoutMask DropoutMask::FromKeep(std::span<const uint8_t> keep, double p) {
  DropoutMask mask;
  mask.scale.reserve(keep.size());
  for (uint8_t k : keep) mask.scale.push_back(k ? 1.0 / (1.0 - p) : 0.0);
  return mask;
}

MentionForward ForwardMention(std::span<const int> feature_ids,
                              const ModelParams &params,
                              const DropoutMask *mask) {
  if (feature_ids.empty()) {
    throw std::invalid_argument("mention embedding of an empty feature bag");
  }
  MentionForward f;
  f.input.assign(params.dim_v(), 0.0);
  for (int id : feature_ids) Axpy(1.0, params.v.Row(id), f.input);
  const double inv = 1.0 / static_cast<double>(feature_ids.size());
  for (double &x : f.input) x *= inv;
  if (mask != nullptr) {
    for (size_t k = 0; k < f.input.size(); ++k) f.input[k] *= mask->scale[k];
  }
  f.z = params.w.MultiplyVector(f.input);
  for (double &x : f.z) x = std::tanh(x);
  return f;
}

std::vector<double> MentionEmbedding(std::span<const int> feature_ids,
                                     const ModelParams &params,
                                     const DropoutMask *mask) {
  return ForwardMention(feature_ids, params, mask).z;
}

double MatchProb(std::span<const double> z, std::span<const double> l_i) {
  return Sigmoid(Dot(z, l_i));
}

std::vector<double> TypeDistribution(std::span<const double> z,
                                     const Matrix &t) {
  return Softmax(t.MultiplyVector(z));
}

double EntropyOverRelations(std::span<const double> p, bool renormalize) {
  double scale = 1.0;
  if (renormalize) {
    double mass = 0.0;
    for (size_t j = 1; j < p.size(); ++j) mass += p[j];
    if (mass <= 0) return 0.0;
    scale = 1.0 / mass;
  }
  double h = 0.0;
  for (size_t j = 1; j < p.size(); ++j) {
    const double q = p[j] * scale;
    if (q > 0) h -= q * std::log(q);
  }
  return h;
}

void SaveModel(const Model &model, std::ostream &out) {
  const ModelParams &p = model.params;
  Writer w(out);
  out.write(kMagic, sizeof(kMagic));
  w.U32(p.dim_v());
  w.U32(p.dim_z());
  w.U32(p.num_features());
  w.U32(p.num_lfs());
  w.U32(p.num_labels() - 1);
  for (const std::string &name : model.labels.names()) w.String(name);
  for (const std::string &name : model.lf_names) w.String(name);
  for (const std::string &f : model.vocab.features()) w.String(f);
  for (const Matrix *m : {&p.v, &p.v_star, &p.w, &p.l, &p.t}) w.Array(*m);
  w.F64(p.phi1);
  w.F64(p.phi0);
  if (!out) throw Error("failed writing model");
}

Model LoadModel(std::istream &in) {
  Reader r(in);
  char magic[sizeof(kMagic)];
  r.Bytes(magic, sizeof(magic));
  if (!std::equal(magic, magic + sizeof(magic), kMagic)) {
    throw ParseError("not a model file (bad magic)", 0);
  }
  const uint32_t dim_v = r.U32();
  const uint32_t dim_z = r.U32();
  const uint32_t num_features = r.U32();
  const uint32_t num_lfs = r.U32();
  const uint32_t num_relations = r.U32();
  if (r.String() != kNoneName) throw ParseError("label 0 must be None", 0);
  std::vector<std::string> relations(num_relations);
  for (auto &name : relations) name = r.String();
  Model model;
  model.labels = LabelSpace(std::move(relations));
  model.lf_names.resize(num_lfs);
  for (auto &name : model.lf_names) name = r.String();
  std::vector<std::string> features(num_features);
  for (auto &f : features) f = r.String();
  model.vocab = FeatureVocab(std::move(features), {}, 1);
  ModelParams &p = model.params;
  p.v = r.Array(num_features, dim_v);
  p.v_star = r.Array(num_features, dim_v);
  p.w = r.Array(dim_z, dim_v);
  p.l = r.Array(num_lfs, dim_z);
  p.t = r.Array(num_relations + 1, dim_z);
  p.phi1 = r.F64();
  p.phi0 = r.F64();
  p.Validate();
  return model;
}

void SaveModelFile(const Model &model, const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open model file for writing: " + path);
  SaveModel(model, out);
}

Model LoadModelFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model file: " + path);
  return LoadModel(in);
}

}  // namespace hetsup
