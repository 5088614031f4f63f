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
"""Causal solutions driven by fractional Brownian motion: checks that the fBm
kernel reduces exactly to the standard kernel at H = 1/2, and solves on seeded
fBm paths for the configured Hurst index."""
import sys

import numpy as np

from causalsde.common.ensemble import map_ordered
from causalsde.common.timer import ProgressTimer
from causalsde.paths import sample_fbm, sample_wiener
from causalsde.report import RunReport
from causalsde.solver import fbm_kernel, solve_fixed_point, solve_fixed_point_fbm
from causalsde.tools.common import run_command


# Arguments of c at which the kernels are compared
_KERNEL_ARGUMENTS = np.linspace(-3.0, 3.0, 601)


def kernel_reduction_gap(model, times):
    """sup |kappa^H(t, x) - kappa(x)| at H = 1/2 over the grid times and
    states c(u) for u in [-3, 3]."""
    low, high = model.argument_range
    arguments = _KERNEL_ARGUMENTS
    arguments = arguments[(arguments >= low) & (arguments <= high)]
    states = np.asarray(model.c(arguments), dtype=float)
    t, x = np.meshgrid(times, states, indexing="ij")

    with np.errstate(invalid="ignore", divide="ignore"):
        actual = np.asarray(fbm_kernel(model, 0.5, t, x), dtype=float)
        expected = np.asarray(model.kappa(x), dtype=float)

    # Both kernels are undefined at the same singular states
    finite = np.isfinite(actual)
    if np.any(finite != np.isfinite(expected)):
        return np.inf

    return float(np.max(np.abs(actual[finite] - expected[finite]), initial=0.0))


def fbm(config):
    experiment = config.experiment
    model = config.model()
    grid = config.grid
    solver = config.solver_config()
    H = experiment["Hurst"]
    n_paths = experiment["Paths"]

    reduction_seed = config.seed.named("reduction")
    fbm_seed = config.seed.named("fbm")

    report = RunReport(
        "fbm",
        seeds={
            "seed": config.seed.to_dict(),
            "reduction": reduction_seed.to_dict(),
            "fbm": fbm_seed.to_dict(),
        },
    )
    report.add("model", model.describe())
    report.add("grid", grid.to_dict())
    report.add("hurst", H)

    kernel_gap = kernel_reduction_gap(model, grid.times)
    w = sample_wiener(grid, reduction_seed)
    standard, _ = solve_fixed_point(model, w, solver)
    reduced, _ = solve_fixed_point_fbm(model, w, 0.5, solver)
    path_gap = float(np.max(np.abs(standard.values - reduced.values)))

    report.add("kernel_gap", kernel_gap)
    report.add("path_gap", path_gap)
    report.check(
        "exact reduction to standard kernel",
        max(kernel_gap, path_gap),
        0.0,
        kernel_gap == 0 and path_gap == 0,
        note="kernel and solution at H = 1/2 against the standard ones",
    )

    def _solve(index):
        path = sample_fbm(grid, H, fbm_seed.child(index))
        _, diagnostics = solve_fixed_point_fbm(model, path, H, solver)

        return diagnostics

    timer = ProgressTimer(n_paths, desc="fBm solves")
    results = map_ordered(_solve, range(n_paths), config.workers, timer)

    residuals = [diagnostics.residual for diagnostics in results]
    report.add("residuals", residuals)
    report.add("iterations", [diagnostics.iterations for diagnostics in results])
    report.check_max("residual", max(residuals), solver.tol, note="sup |Phi(X) - X|")

    return report


def main(argv):
    """Main function; takes a list of arguments but excluding sys.argv[0]."""
    return run_command("fbm", argv, fbm, description=__doc__)


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
