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
"""Strong convergence study of the causal construction against a reference
scheme on shared Brownian paths; writes 'convergence.csv'."""
import sys

from causalsde.reference import convergence_study
from causalsde.report import RunReport
from causalsde.tools.common import run_command


def converge(config):
    experiment = config.experiment
    seed = config.seed.named("converge")
    model = config.model()

    table = convergence_study(
        model,
        experiment["StepList"],
        experiment["Paths"],
        seed,
        T=config.grid.T,
        config=config.solver_config(),
        reference=experiment["Reference"],
        workers=config.workers,
    )
    table.write_csv(config.output_path("convergence.csv"))

    report = RunReport(
        "converge", seeds={"seed": config.seed.to_dict(), "paths": seed.to_dict()}
    )
    report.add("model", model.describe())
    report.add("table", table.to_dict())
    report.check("failures", table.failures, 0, table.failures == 0)

    errors = table.mean_errors()
    if all(error == 0 for error in errors):
        # Both constructions coincide, e.g. for c = id and kappa = 0
        report.check("identical", 0.0, 0.0, True, note="all strong errors are 0")
    else:
        report.check(
            "decreasing",
            errors,
            None,
            table.strictly_decreasing(),
            note="mean strong error decreases under refinement",
        )
        report.check(
            "slope",
            table.slope,
            experiment["MinSlope"],
            table.slope is not None and table.slope >= experiment["MinSlope"],
        )

    return report


def main(argv):
    """Main function; takes a list of arguments but excluding sys.argv[0]."""
    return run_command("converge", argv, converge, description=__doc__)


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
