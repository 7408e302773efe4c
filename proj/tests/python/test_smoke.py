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

import math
import os
import pathlib

import pytest

import transmon_twin as tt

ROOT = pathlib.Path(os.environ.get("TWIN_SOURCE_DIR", pathlib.Path(__file__).parents[2]))
DEVICE = ROOT / "data" / "soprano_d.toml"


@pytest.fixture(scope="module")
def device():
    return tt.load_device(str(DEVICE))


def test_device_properties(device):
    assert device.num_qubits == 5
    assert device.active_qubits == [0, 1, 2, 3]
    assert device.edges == [(0, 2), (1, 2), (2, 3), (2, 4)]
    assert len(device.hash()) == 16
    assert tt.parse_device(device.to_toml()).hash() == device.hash()


def test_beta_uses_calibrated_values(device):
    # Edge 2_3: qubit 3 is the higher-frequency endpoint.
    j, delta = 19.2e3, 5.85e9 - 5.40e9
    alpha_u, alpha_v = 188e6, 212e6
    expected = 2 * math.pi * j**2 * (1 / (delta - alpha_u) - 1 / (delta - alpha_v))
    assert device.beta(2, 3) == pytest.approx(expected, rel=1e-12)
    assert device.beta(3, 2) == device.beta(2, 3)


def test_bad_device_raises():
    with pytest.raises(tt.ParseError):
        tt.load_device("/nonexistent.toml")
    with pytest.raises(ValueError):
        tt.parse_device(DEVICE.read_text().replace("t2_ns = 18000.0", "t2_ns = 90000.0"))


def test_channels_are_trace_preserving():
    import numpy as np

    for kraus in (tt.gamp(0.3, 0.05), tt.deph(0.006), tt.deph2(0.10375),
                  tt.decay_channel(40e-6, 18e-6, 0.05, 13e-9)):
        total = sum(k.conj().T @ k for k in kraus)
        assert np.allclose(total, np.eye(total.shape[0]), atol=1e-12)
    assert tt.delta2_from_fidelity(0.917) == pytest.approx(0.10375)


def test_emulate_ghz4(device):
    suite = tt.benchmark_suite(device)
    assert [s["label"] for s in suite][-2:] == ["ghz_0123", "w_0123"]
    ghz = suite[-2]
    assert ghz["ideal"] == {"0000": 0.5, "1111": 0.5}

    result = tt.emulate(ghz["circuit"], device, shots=20000, seed=42)
    assert math.isclose(sum(result["exact"].values()), 1.0, abs_tol=1e-9)
    assert sum(result["counts"].values()) == 20000
    assert "[crosstalk]" in result["schedule"]
    noisy_tvd = tt.tvd(result["exact"], ghz["ideal"])
    assert 0.05 < noisy_tvd < 0.6

    again = tt.emulate(ghz["circuit"], device, shots=20000, seed=42)
    assert again["counts"] == result["counts"]


def test_noise_toggles(device):
    params = tt.NoiseParams.from_device(device)
    params.toggles = "none"
    c = tt.Circuit(5, "bell")
    c.ry(2, math.pi / 2).cz(2, 3).ry(3, math.pi / 2).measure([2, 3])
    exact = tt.emulate(c, device, params)["exact"]
    # cz acts trivially while qubit 3 is still |0>, so all four outcomes are equal.
    assert sorted(exact) == ["00", "01", "10", "11"]
    assert all(math.isclose(p, 0.25, abs_tol=1e-12) for p in exact.values())
    params.toggles = "all"
    assert params.toggles == "1q,2q,spam,passive,crosstalk"
    with pytest.raises(ValueError):
        params.toggles = "no_such_toggle"


def test_circuit_text_round_trip():
    c = tt.parse_circuit("label demo\nqubits 3\nrx q0 pi/2\ncz q0 q1\nmeasure q0 q1\n")
    assert c.label == "demo"
    assert len(c) == 2
    assert tt.parse_circuit(c.to_text()).to_text() == c.to_text()


def test_cli_entry_point(device, tmp_path):
    code, out, err = tt.run_cli(["emulate", "--device", str(DEVICE), "--suite",
                                 "--shots", "1000", "--out", str(tmp_path)])
    assert code == 0, err
    assert (tmp_path / "summary.json").exists()
    code, _, err = tt.run_cli(["emulate", "--device", "/missing.toml", "--suite"])
    assert code == 2
    assert "missing.toml" in err
