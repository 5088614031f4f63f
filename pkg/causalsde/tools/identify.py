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
"""Recovers driving Wiener paths from diffusion paths. On generated data the
recovered driver is compared with the true one; an observed path (CSV) is
inverted and, if an instrument model is configured, the recovered driver is
paired with the response of that model."""
import logging
import sys

from causalsde.analysis import AlignedPair, co_driven_pairing, recover_driver
from causalsde.common.ensemble import map_ordered
from causalsde.common.timer import ProgressTimer
from causalsde.paths import Path, sample_wiener
from causalsde.reference import strong_error
from causalsde.report import RunReport
from causalsde.solver import solve_fixed_point
from causalsde.tools.common import run_command


# Sup-norm bound on the recovery error of the round trip
ROUND_TRIP_TOLERANCE = 1e-9


def identify(config):
    log = logging.getLogger(__name__)
    experiment = config.experiment
    model = config.model()
    instrument = config.instrument()
    grid = config.grid
    solver = config.solver_config()
    n_paths = experiment["Paths"]
    seed = config.seed.named("identify")

    report = RunReport(
        "identify", seeds={"seed": config.seed.to_dict(), "drivers": seed.to_dict()}
    )
    report.add("model", model.describe())
    report.add("instrument", instrument.describe())

    def _round_trip(index):
        w = sample_wiener(grid, seed.child(index))
        x, _ = solve_fixed_point(model, w, solver)
        y, _ = solve_fixed_point(instrument, w, solver)

        driver, pair = co_driven_pairing(model, x, y, solver.quadrature)
        resolved, _ = solve_fixed_point(model, driver, solver)

        return strong_error(driver, w), strong_error(resolved, x), pair

    timer = ProgressTimer(n_paths, desc="Round trips")
    results = map_ordered(_round_trip, range(n_paths), config.workers, timer)

    recovery = [recovery for (recovery, _, _) in results]
    resolve = [resolve for (_, resolve, _) in results]
    results[0][2].write_csv(config.output_path("identify_pair.csv"))

    report.add("recovery_errors", recovery)
    report.add("resolve_errors", resolve)
    report.check_max(
        "recovery", max(recovery), ROUND_TRIP_TOLERANCE, note="sup |w_recovered - w|"
    )
    report.check_max(
        "resolve",
        max(resolve),
        ROUND_TRIP_TOLERANCE,
        note="sup |X(w_recovered) - X(w)|",
    )

    observed = experiment["Observed"]
    if observed is not None:
        x = Path.read_csv(observed, experiment["ObservedColumn"])
        driver = recover_driver(model, x, solver.quadrature)
        response, _ = solve_fixed_point(instrument, driver, solver)

        filename = experiment["ObservedOutput"]
        if filename is None:
            filename = config.output_path("observed_pair.csv")
        AlignedPair(driver, response).write_csv(filename)
        log.info("Wrote driver recovered from %r to %r", observed, filename)

        report.add("observed", {"file": observed, "output": filename, "n": x.grid.n})

    return report


def main(argv):
    """Main function; takes a list of arguments but excluding sys.argv[0]."""
    return run_command("identify", argv, identify, description=__doc__)


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
