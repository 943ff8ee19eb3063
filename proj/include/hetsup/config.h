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

#ifndef HETSUP_CONFIG_H_
#define HETSUP_CONFIG_H_

#include <iosfwd>
#include <string>
#include <string_view>

#include "hetsup/model.h"

namespace hetsup {

// Sets one hyperparameter from its textual value. Keys match the Hyperparams
// field names; `candidates` takes "annotated" or "all". Throws ConfigError
// on an unknown key or unparsable value.
void ApplyConfigValue(Hyperparams &hyper, std::string_view key,
                      std::string_view value);

// TOML-style `key = value` lines. Blank lines, `#` comments and `[section]`
// headers are skipped; string values may be quoted.
Hyperparams ReadConfig(std::istream &in, Hyperparams base = {});
Hyperparams LoadConfig(const std::string &path, Hyperparams base = {});

// Writes every key in the format ReadConfig accepts.
void WriteConfig(const Hyperparams &hyper, std::ostream &out);

}  // namespace hetsup

#endif  // HETSUP_CONFIG_H_
