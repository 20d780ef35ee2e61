# Copyright 2026 The sparsecomm Authors. All Rights Reserved.
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
# ==============================================================================
"""Sparsified synchronous SGD with error feedback on a simulated cluster."""

from sparsecomm._core import (
    ConfigError,
    ContractViolation,
    DivergenceError,
    Error,
    IoError,
    ProtocolViolation,
    RunConfig,
    SparsePayload,
    StructureError,
    WorkerTraffic,
    aggregate_gathered,
    all_gather,
    all_reduce_sum,
    bench,
    compress,
    decompress,
    gather,
    k_for,
    load_config,
    parse_config,
    real_bytes,
    report,
    run,
    train,
)

__version__ = "0.1.0"
