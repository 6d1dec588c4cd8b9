# Copyright 2026 The msmsq Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Smoke tests for the Python module and the command line driver."""

import json
import math
import os
import subprocess

import numpy as np
import pytest

import msmsq

SMALL = "n_modes: 10\nn_steps: 48\nnonlinear_gain: 20\n"


def test_version_and_experiments():
    assert msmsq.__version__ == "0.1.0"
    assert "lo_waist_scan" in msmsq.experiments()
    assert "validate" in msmsq.experiments()


def test_fundamental_mode_matches_gaussian_beam():
    xi = np.linspace(-2.0, 2.0, 9)
    zeta = 0.3
    u = msmsq.mode_values(3, xi.tolist(), zeta)
    assert u.shape == (3, 9)
    b = 1.0 - 1j * zeta
    expected = np.pi ** -0.25 / np.sqrt(b) * np.exp(-xi**2 / (2.0 * b))
    np.testing.assert_allclose(u[0], expected, atol=1e-13)


def test_width_matrix_diagonal():
    f = msmsq.width_matrix(6)
    np.testing.assert_allclose(np.diag(f).real, [1, 3, 5, 7, 9, 11], atol=1e-11)


def test_fock_moments_of_coherent_state_are_poissonian():
    m = msmsq.fock_moments(1.5)
    assert m["number_mean"] == pytest.approx(2.25, abs=1e-9)
    assert m["number_variance"] == pytest.approx(2.25, abs=1e-8)
    assert m["leakage"] < 1e-8


def test_single_mode_baselines():
    rows = msmsq.single_mode_width_baselines([1.0, 2.0], -13.7, 20)
    assert rows[0]["coherent"] == pytest.approx(math.sqrt(3.0), rel=1e-8)
    assert rows[1]["coherent"] == pytest.approx(math.sqrt(3.0) / 2.0, rel=1e-8)
    assert rows[0]["squeezed"] < rows[0]["coherent"]
    assert msmsq.squeeze_parameter_for_db(-13.7) == pytest.approx(1.5773, abs=1e-4)


def test_run_returns_tables_and_metadata(tmp_path):
    text = SMALL + "waist_scan: [1.0, 0.3]\nexperiment: lo_waist_scan\n"
    res = msmsq.run(text, out_dir=str(tmp_path))
    assert res["ok"]
    table = res["tables"]["lo_waist_scan"]
    assert table["columns"][:2] == ["x0_over_wp", "wl_over_wp"]
    assert table["data"].shape == (2, 6)
    meta = json.loads(res["metadata"])
    assert meta["experiment"] == "lo_waist_scan"
    assert meta["config_hash"] == msmsq.config_hash(text)
    written = np.loadtxt(tmp_path / "lo_waist_scan.csv", delimiter=",", skiprows=1)
    np.testing.assert_allclose(written, table["data"], rtol=1e-9)


def test_configuration_errors_raise_value_error():
    with pytest.raises(ValueError, match="bogus"):
        msmsq.run("bogus: 1\n")
    with pytest.raises(msmsq.ConfigError, match="line|:1"):
        msmsq.canonical_config("n_modes: many\n")
    with pytest.raises(ValueError):
        msmsq.run(SMALL, "no_such_experiment")


def cli():
    path = os.environ.get("MSMSQ_CLI")
    if not path or not os.path.exists(path):
        pytest.skip("command line driver not built")
    return path


def test_cli_exit_codes(tmp_path):
    exe = cli()
    bad = tmp_path / "bad.yaml"
    bad.write_text("n_modes: 10\nunknown_key: 3\n")
    r = subprocess.run([exe, "-c", str(bad)], capture_output=True, text=True)
    assert r.returncode == 1
    assert "unknown_key" in r.stderr
    r = subprocess.run([exe, "-c", str(tmp_path / "missing.yaml")], capture_output=True, text=True)
    assert r.returncode == 1
    r = subprocess.run([exe, "--no-such-flag"], capture_output=True, text=True)
    assert r.returncode == 1


def test_cli_outputs_are_reproducible(tmp_path):
    exe = cli()
    cfg = tmp_path / "small.yaml"
    cfg.write_text(SMALL + "waist_scan: [1.0, 0.5, 0.2]\n")
    outputs = []
    for name in ("a", "b"):
        out = tmp_path / name
        r = subprocess.run([exe, "lo_waist_scan", "-c", str(cfg), "-o", str(out)],
                           capture_output=True, text=True)
        assert r.returncode == 0, r.stderr
        outputs.append(((out / "lo_waist_scan.csv").read_bytes(),
                        (out / "metadata.json").read_bytes()))
    assert outputs[0] == outputs[1]
