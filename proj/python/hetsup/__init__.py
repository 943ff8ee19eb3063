# Copyright 2026 The hetsup Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Relation extraction from heterogeneous supervision."""

from hetsup._hetsup import (
    ConfigError,
    HetsupError,
    NONE_LABEL,
    ParseError,
    ValidationError,
    conflict_stats,
    entropy_over_relations,
    load_corpus,
    predict,
    run_cli,
    synth,
    train,
    type_distribution,
)

__all__ = [
    "ConfigError",
    "HetsupError",
    "NONE_LABEL",
    "ParseError",
    "ValidationError",
    "conflict_stats",
    "entropy_over_relations",
    "load_corpus",
    "predict",
    "run_cli",
    "synth",
    "train",
    "type_distribution",
]
