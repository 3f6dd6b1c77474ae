# Copyright 2026 The fluxtheo authors
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

"""Drives the command line tool against the shipped sample scenarios.

CMake exports FLUXTHEO_CLI (the built binary) and FLUXTHEO_SCENARIOS (the
sample directory) into the test environment.
"""

import json
import os
import pathlib
import subprocess

import pytest

CLI = os.environ.get("FLUXTHEO_CLI")
SCENARIOS = os.environ.get("FLUXTHEO_SCENARIOS")

pytestmark = pytest.mark.skipif(
    not (CLI and os.path.exists(CLI) and SCENARIOS),
    reason="FLUXTHEO_CLI / FLUXTHEO_SCENARIOS not set",
)


def run_cli(*args):
    return subprocess.run([CLI, *map(str, args)], capture_output=True,
                          text=True, timeout=300)


def scenario(name):
    return pathlib.Path(SCENARIOS) / name


def results_of(out_dir):
    with open(pathlib.Path(out_dir) / "results.json") as fh:
        return json.load(fh)


def test_validate_all_samples():
    samples = sorted(pathlib.Path(SCENARIOS).glob("*.json"))
    assert len(samples) >= 4
    for path in samples:
        proc = run_cli("validate", path)
        assert proc.returncode == 0, proc.stderr
        assert proc.stdout.startswith("ok:")


def test_validate_rejects_bad_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"kind": "protocol", "rho": [[1, 0], [0, 0]]}')
    proc = run_cli("validate", bad)
    assert proc.returncode == 2
    assert "error" in proc.stderr


def test_run_closed_system_sample(tmp_path):
    proc = run_cli("run", scenario("closed_qubit_work.json"), "-o", tmp_path)
    assert proc.returncode == 0, proc.stderr
    res = results_of(tmp_path)
    assert res["kind"] == "protocol"
    assert abs(res["efficacy"]["gamma"] - 1.0) < 1e-12
    assert res["jarzynski_residual"] < 1e-12
    assert res["second_law"]["holds"]
    assert res["crooks"]["max_atom_residual"] < 1e-10
    assert res["entropy"]["residual_thermal"] < 1e-9
    for row in res["mgf"]:
        assert row["residual"] < 1e-9


def test_run_dephasing_sample(tmp_path):
    proc = run_cli("run", scenario("qubit_measurement_dual.json"),
                   "-o", tmp_path)
    assert proc.returncode == 0, proc.stderr
    res = results_of(tmp_path)
    assert res["bistochasticity"]["unital"]
    assert abs(res["efficacy"]["gamma"] - 1.0) < 1e-12
    assert res["crooks"]["max_atom_residual"] < 1e-10
    fwd_total = sum(p for _, p in res["forward"]["atoms"])
    assert abs(fwd_total - 1.0) < 1e-12
    for row in res["mgf"]:
        assert row["residual"] < 1e-9


def test_run_feedback_sample(tmp_path):
    proc = run_cli("run", scenario("feedback_two_outcome.json"), "-o", tmp_path)
    assert proc.returncode == 0, proc.stderr
    res = results_of(tmp_path)
    assert res["records"] == 2
    eff = res["efficacy"]
    assert abs(eff["gamma"] - eff["control_loop_closed_form"]) < 1e-10
    assert abs(res["mutual_info"]["integral"] - 1.0) < 1e-10
    assert res["mgf"]["max_residual"] < 1e-9


def test_run_anneal_sample_and_determinism(tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    args = ("run", scenario("anneal_two_qubit.json"), "--ode-tol", "1e-6",
            "--seed", "11")
    proc = run_cli(*args, "-o", out1)
    assert proc.returncode == 0, proc.stderr

    res = results_of(out1)
    assert res["kind"] == "anneal"
    assert res["qje"]["residual"] < 1e-4
    assert res["first_moment"]["residual"] < 1e-4
    assert res["max_trace_residual"] < 1e-5
    assert res["trajectory_rows"] > 0
    assert abs(sum(res["f"]) - 1.0) < 1e-8

    counts = (out1 / "counts.csv").read_text().splitlines()
    assert counts[0] == "state_label,count"
    total = sum(int(line.split(",")[1]) for line in counts[1:])
    assert total == res["counts_shots"] == 4096
    assert (out1 / "trajectory.csv").exists()

    proc = run_cli(*args, "-o", out2)
    assert proc.returncode == 0, proc.stderr
    assert (out1 / "counts.csv").read_bytes() == (out2 / "counts.csv").read_bytes()
    assert (out1 / "results.json").read_bytes() == (out2 / "results.json").read_bytes()


def test_fit_subcommand(tmp_path):
    proc = run_cli("fit", scenario("fit_synthetic.json"), "-o", tmp_path)
    assert proc.returncode == 0, proc.stderr
    assert "kappa =" in proc.stdout
    res = results_of(tmp_path)
    assert res["kind"] == "fit"
    assert res["points"] == 6
    assert res["kappa_rel_error"] < 5e-3
    assert res["evaluations"] == len(res["trace"])
    header = (tmp_path / "points.csv").read_text().splitlines()[0]
    assert header == "J,t_f_us,state_label,count"


def test_fit_rejects_other_kinds(tmp_path):
    proc = run_cli("fit", scenario("closed_qubit_work.json"), "-o", tmp_path)
    assert proc.returncode == 2
    assert "expected a 'fit' scenario" in proc.stderr
