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
"""Solves the causal equation on seeded Wiener drivers and writes one CSV per
path with the columns t, w, X and w_tilde."""
import logging
import sys

import numpy as np
import pandas as pd

from causalsde.common.ensemble import map_ordered
from causalsde.common.timer import ProgressTimer
from causalsde.paths import sample_wiener
from causalsde.reference import strong_error
from causalsde.report import RunReport
from causalsde.solver import (
    solve_feedback_ode,
    solve_fixed_point,
    solve_with_random_initial,
    translated_path,
)
from causalsde.tools.common import run_command


def simulate(config):
    log = logging.getLogger(__name__)
    model = config.model()
    grid = config.grid
    solver = config.solver_config()
    n_paths = config.experiment["Paths"]
    spread = config.experiment["InitialSpread"]
    substeps = config.feedback_substeps

    drivers = config.seed.named("drivers")
    initial = config.seed.named("initial")

    def _simulate(index):
        w = sample_wiener(grid, drivers.child(index))
        if spread:
            xi = spread * initial.child(index).generator().standard_normal()
            x, diagnostics = solve_with_random_initial(model, w, xi, solver)
            feedback_gap = None
        else:
            x, diagnostics = solve_fixed_point(model, w, solver)
            feedback_gap = strong_error(x, solve_feedback_ode(model, w, substeps))

        return w, x, diagnostics, feedback_gap

    timer = ProgressTimer(n_paths, desc="Simulations")
    results = map_ordered(_simulate, range(n_paths), config.workers, timer)

    report = RunReport(
        "simulate",
        seeds={"seed": config.seed.to_dict(), "drivers": drivers.to_dict()},
    )
    report.add("model", model.describe())
    report.add("grid", grid.to_dict())

    records = []
    identity_error = 0.0
    for index, (w, x, diagnostics, feedback_gap) in enumerate(results):
        w_tilde = translated_path(diagnostics)
        deviation = np.abs(model.c(w_tilde.values) - x.values)
        deviation /= np.maximum(1.0, np.abs(x.values))
        identity_error = max(identity_error, float(np.max(deviation)))

        filename = config.output_path("path_%04i.csv" % (index,))
        table = pd.DataFrame(
            {"t": grid.times, "w": w.values, "X": x.values, "w_tilde": w_tilde.values}
        )
        table.to_csv(filename, index=False, float_format="%.17g")

        record = diagnostics.to_dict()
        record["file"] = filename
        record["x0"] = x.values[0]
        record["feedback_gap"] = feedback_gap
        records.append(record)

    log.info("Wrote %i paths to %r", n_paths, config.output)

    residual = max(record["residual"] for record in records)
    converged = sum(record["converged"] for record in records)

    report.add("paths", records)
    report.add("iterations", [record["iterations"] for record in records])
    report.check("converged", converged, n_paths, converged == n_paths)
    report.check_max("residual", residual, solver.tol, note="sup |Phi_w(X) - X|")
    report.check_max(
        "translated_identity", identity_error, 1e-12, note="relative sup |c(w~) - X|"
    )

    return report


def main(argv):
    """Main function; takes a list of arguments but excluding sys.argv[0]."""
    return run_command("simulate", argv, simulate, description=__doc__)


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
