# Copyright 2026 The transmon-twin Authors
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

"""Python interface to the transmon digital-twin emulator."""

from ._twin import (
    Circuit,
    DeviceModel,
    NoiseParams,
    ParseError,
    SimulationError,
    ValidationError,
    benchmark_suite,
    decay_channel,
    delta1_from_fidelity,
    delta2_from_fidelity,
    deph,
    deph2,
    emulate,
    gamp,
    load_circuit,
    load_device,
    load_params,
    parse_circuit,
    parse_device,
    run_cli,
    tvd,
)

__all__ = [
    "Circuit",
    "DeviceModel",
    "NoiseParams",
    "ParseError",
    "SimulationError",
    "ValidationError",
    "benchmark_suite",
    "decay_channel",
    "delta1_from_fidelity",
    "delta2_from_fidelity",
    "deph",
    "deph2",
    "emulate",
    "gamp",
    "load_circuit",
    "load_device",
    "load_params",
    "parse_circuit",
    "parse_device",
    "run_cli",
    "tvd",
]
