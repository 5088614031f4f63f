#!/usr/bin/env python3
#
# Copyright (c) 2021 causalsde developers
#
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in
# all copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.
#
import json

import numpy as np
import pandas as pd

from causalsde.main import main
from causalsde.models import CatalogEntry, catalog_model
from causalsde.paths import Grid, Seed, sample_wiener
from causalsde.solver import solve_fixed_point


_IDENTITY = """
Model:
  Name: unit
  Phi: zero
"""

_SINH = """
Model:
  Name: sinh
  Shift: 0.5
"""


def _run(tmp_path, command, text, *args):
    tmp_path.mkdir(parents=True, exist_ok=True)
    filename = tmp_path / "run.yaml"
    filename.write_text(text)
    output = tmp_path / "results"

    argv = [command, "--config", str(filename), "--out", str(output), "--seed", "1234"]
    returncode = main(argv + list(args))

    return returncode, output


def _report(output, command):
    with (output / ("%s.report.json" % (command,))).open() as handle:
        return json.load(handle)


def _error(output):
    with (output / "error.json").open() as handle:
        return json.load(handle)


###############################################################################
###############################################################################
# simulate


def test_simulate__identity_model_reproduces_driver(tmp_path):
    text = _IDENTITY + "Grid:\n  Steps: 64\nExperiment:\n  Paths: 3\n"
    returncode, output = _run(tmp_path, "simulate", text)

    assert returncode == 0
    for index in range(3):
        table = pd.read_csv(output / ("path_%04i.csv" % (index,)))
        assert list(table.columns) == ["t", "w", "X", "w_tilde"]
        assert np.array_equal(table["X"], table["w"])

    report = _report(output, "simulate")
    assert report["passed"]
    assert report["data"]["iterations"] == [2, 2, 2]
    assert report["seeds"]["seed"] == {"value": 1234, "stream": []}


def test_simulate__writes_resolved_configuration(tmp_path):
    text = _SINH + "Grid:\n  Steps: 32\nExperiment:\n  Paths: 1\n"
    returncode, output = _run(tmp_path, "simulate", text)

    assert returncode == 0
    resolved = (output / "simulate.config.yaml").read_text()
    assert "Seed: 1234" in resolved


def test_simulate__same_seed_same_paths(tmp_path):
    text = _SINH + "Grid:\n  Steps: 32\nExperiment:\n  Paths: 2\n  Workers: 2\n"
    _, first = _run(tmp_path / "first", "simulate", text)
    _, second = _run(tmp_path / "second", "simulate", text)

    for index in range(2):
        name = "path_%04i.csv" % (index,)
        assert (first / name).read_text() == (second / name).read_text()


def test_simulate__random_initial_condition(tmp_path):
    text = _SINH + "Grid:\n  Steps: 32\nExperiment:\n  Paths: 2\n  InitialSpread: 1.0\n"
    returncode, output = _run(tmp_path, "simulate", text)

    assert returncode == 0
    records = _report(output, "simulate")["data"]["paths"]
    assert all(record["feedback_gap"] is None for record in records)
    assert records[0]["x0"] != records[1]["x0"]


def test_simulate__missing_model_name(tmp_path):
    returncode, output = _run(tmp_path, "simulate", "Grid:\n  Steps: 32\n")

    assert returncode == 1
    error = _error(output)
    assert error["command"] == "simulate"
    assert error["error"] == "ConfigError"
    assert "Model :: Name" in error["message"]


def test_simulate__no_convergence(tmp_path):
    text = _SINH + "Grid:\n  Steps: 64\nSolver:\n  MaxIterations: 1\n"
    returncode, output = _run(tmp_path, "simulate", text)

    assert returncode == 1
    assert _error(output)["error"] == "NoConvergence"


###############################################################################
###############################################################################
# converge


def test_converge__identity_model(tmp_path):
    text = _IDENTITY + "Experiment:\n  Paths: 2\n  StepList: [16, 64]\n"
    returncode, output = _run(tmp_path, "converge", text)

    assert returncode == 0
    report = _report(output, "converge")
    assert report["checks"]["identical"]["passed"]

    table = pd.read_csv(output / "convergence.csv")
    assert list(table["n"][:2]) == ["16", "64"]
    assert list(table["n"])[-1] == "slope"


def test_converge__single_grid(tmp_path):
    text = _SINH + "Experiment:\n  Paths: 2\n  StepList: [64]\n"
    returncode, output = _run(tmp_path, "converge", text)

    assert returncode == 1
    assert _error(output)["error"] == "ValueError"


def test_converge__sinh_model(tmp_path):
    text = _SINH + "Experiment:\n  Paths: 10\n  StepList: [32, 128, 512]\n"
    text += "  MinSlope: 0.3\n"
    returncode, output = _run(tmp_path, "converge", text)

    assert returncode == 0, _report(output, "converge")["checks"]


###############################################################################
###############################################################################
# girsanov


def test_girsanov__zero_kernel(tmp_path):
    text = _IDENTITY + "Grid:\n  Steps: 16\nExperiment:\n  Samples: 2000\n"
    text += "  Paths: 200\n"
    returncode, output = _run(tmp_path, "girsanov", text)

    report = _report(output, "girsanov")
    assert report["checks"]["mean_weight"]["passed"]
    assert report["data"]["weight"]["mean"] == 1.0
    assert returncode == 0


def test_girsanov__single_path(tmp_path):
    text = _IDENTITY + "Grid:\n  Steps: 16\nExperiment:\n  Samples: 200\n  Paths: 1\n"
    returncode, output = _run(tmp_path, "girsanov", text)

    assert returncode == 1
    assert _error(output)["error"] == "ConfigError"


###############################################################################
###############################################################################
# density


def test_density__translated_law(tmp_path):
    text = "Model:\n  Name: sinh\n  Shift: 1.0\nGrid:\n  Steps: 16\n"
    text += "Experiment:\n  Samples: 300\n  DumpSamples: yes\n"
    returncode, output = _run(tmp_path, "density", text)

    assert returncode == 0
    samples = pd.read_csv(output / "density_samples.csv")
    assert sorted(samples.columns) == ["X", "c_w_tilde", "w", "w_tilde"]
    assert len(samples) == 300


def test_density__time_not_on_grid(tmp_path):
    text = _SINH + "Grid:\n  Steps: 16\nExperiment:\n  Time: 0.3\n  Samples: 10\n"
    returncode, output = _run(tmp_path, "density", text)

    assert returncode == 1
    assert _error(output)["error"] == "ValueError"


###############################################################################
###############################################################################
# fbm


def test_fbm__reduction_and_solves(tmp_path):
    text = _SINH + "Grid:\n  Steps: 32\nExperiment:\n  Paths: 2\n  Hurst: 0.7\n"
    returncode, output = _run(tmp_path, "fbm", text)

    assert returncode == 0
    report = _report(output, "fbm")
    assert report["data"]["kernel_gap"] == 0.0
    assert report["data"]["path_gap"] == 0.0


###############################################################################
###############################################################################
# identify


_IDENTIFY = _SINH + """
Instrument:
  Name: unit
  Phi: tanh
Grid:
  Steps: 128
Experiment:
  Paths: 2
"""


def test_identify__round_trip(tmp_path):
    returncode, output = _run(tmp_path, "identify", _IDENTIFY)

    assert returncode == 0
    pair = pd.read_csv(output / "identify_pair.csv")
    assert list(pair.columns) == ["t", "input", "output"]
    assert len(pair) == 129


def test_identify__observed_path(tmp_path):
    model = catalog_model(CatalogEntry("sinh", a=0.5))
    w = sample_wiener(Grid(1.0, 128), Seed(99))
    x, _ = solve_fixed_point(model, w)

    observed = tmp_path / "observed.csv"
    pd.DataFrame({"t": x.times, "X": x.values}).to_csv(
        observed, index=False, float_format="%.17g"
    )

    text = _IDENTIFY + "  Observed: %s\n" % (observed,)
    returncode, output = _run(tmp_path, "identify", text)

    assert returncode == 0
    pair = pd.read_csv(output / "observed_pair.csv")
    assert np.max(np.abs(pair["input"].values - w.values)) <= 1e-9


###############################################################################
###############################################################################
# verify


def test_verify__closed_form_model(tmp_path):
    returncode, output = _run(tmp_path, "verify", _SINH)

    assert returncode == 0
    assert _report(output, "verify")["passed"]


def test_verify__tabulated_model(tmp_path):
    text = _SINH + "  Construction: tabulated\n  OdeStep: 0.001\n  OdeRange: 5\n"
    returncode, _ = _run(tmp_path, "verify", text)

    assert returncode == 0
