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

#include "hetsup/config.h"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "hetsup/errors.h"

namespace hetsup {
namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string_view Unquote(std::string_view s) {
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') &&
      s.back() == s.front()) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

template <typename T>
T ParseNumber(std::string_view key, std::string_view value) {
  T out{};
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("bad value for " + std::string(key) + ": '" +
                      std::string(value) + "'");
  }
  return out;
}

bool ParseBool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("bad boolean for " + std::string(key) + ": '" +
                    std::string(value) + "'");
}

}  // namespace

void ApplyConfigValue(Hyperparams &h, std::string_view key,
                      std::string_view raw) {
  const std::string_view value = Unquote(Trim(raw));
  if (key == "dim_v") h.dim_v = ParseNumber<int>(key, value);
  else if (key == "dim_z") h.dim_z = ParseNumber<int>(key, value);
  else if (key == "lambda1") h.lambda1 = ParseNumber<double>(key, value);
  else if (key == "lambda2") h.lambda2 = ParseNumber<double>(key, value);
  else if (key == "alpha") h.alpha = ParseNumber<double>(key, value);
  else if (key == "linear_decay") h.linear_decay = ParseBool(key, value);
  else if (key == "negatives") h.negatives = ParseNumber<int>(key, value);
  else if (key == "dropout") h.dropout = ParseNumber<double>(key, value);
  else if (key == "pair_samples") h.pair_samples = ParseNumber<int>(key, value);
  else if (key == "epochs") h.epochs = ParseNumber<int>(key, value);
  else if (key == "seed") h.seed = ParseNumber<uint64_t>(key, value);
  else if (key == "min_count") h.min_count = ParseNumber<int>(key, value);
  else if (key == "eta") h.eta = ParseNumber<double>(key, value);
  else if (key == "phi1") h.phi1 = ParseNumber<double>(key, value);
  else if (key == "phi0") h.phi0 = ParseNumber<double>(key, value);
  else if (key == "max_pairs_per_sentence")
    h.max_pairs_per_sentence = ParseNumber<int>(key, value);
  else if (key == "renormalize_entropy")
    h.renormalize_entropy = ParseBool(key, value);
  else if (key == "candidates") {
    if (value == "annotated") h.candidates = CandidatePolicy::kAnnotated;
    else if (value == "all") h.candidates = CandidatePolicy::kAllLabels;
    else throw ConfigError("candidates must be 'annotated' or 'all'");
  } else {
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
}

Hyperparams ReadConfig(std::istream &in, Hyperparams base) {
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::string_view view = line;
    if (auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = Trim(view);
    if (view.empty() || view.front() == '[') continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_number) +
                        ": expected key = value");
    }
    ApplyConfigValue(base, Trim(view.substr(0, eq)), view.substr(eq + 1));
  }
  base.Validate();
  return base;
}

Hyperparams LoadConfig(const std::string &path, Hyperparams base) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file: " + path);
  return ReadConfig(in, std::move(base));
}

void WriteConfig(const Hyperparams &h, std::ostream &out) {
  out << "dim_v = " << h.dim_v << '\n'
      << "dim_z = " << h.dim_z << '\n'
      << "lambda1 = " << h.lambda1 << '\n'
      << "lambda2 = " << h.lambda2 << '\n'
      << "alpha = " << h.alpha << '\n'
      << "linear_decay = " << (h.linear_decay ? "true" : "false") << '\n'
      << "negatives = " << h.negatives << '\n'
      << "dropout = " << h.dropout << '\n'
      << "pair_samples = " << h.pair_samples << '\n'
      << "epochs = " << h.epochs << '\n'
      << "seed = " << h.seed << '\n'
      << "min_count = " << h.min_count << '\n';
  if (h.eta) out << "eta = " << *h.eta << '\n';
  if (h.phi1) out << "phi1 = " << *h.phi1 << '\n';
  if (h.phi0) out << "phi0 = " << *h.phi0 << '\n';
  if (h.max_pairs_per_sentence) {
    out << "max_pairs_per_sentence = " << *h.max_pairs_per_sentence << '\n';
  }
  out << "candidates = \""
      << (h.candidates == CandidatePolicy::kAllLabels ? "all" : "annotated")
      << "\"\n"
      << "renormalize_entropy = "
      << (h.renormalize_entropy ? "true" : "false") << '\n';
}

}  // namespace hetsup
