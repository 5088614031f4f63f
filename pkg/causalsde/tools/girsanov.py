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
"""Monte-Carlo checks of the Girsanov weight of the weak-solution
construction: E[Lambda] = 1, and Lambda-weighted expectations of c(b(T))
against direct expectations over causal solves."""
import math
import sys

from causalsde.common.schema import ConfigError
from causalsde.measure import expected_weight, weighted_expectation
from causalsde.report import RunReport
from causalsde.tools.common import run_command


def girsanov(config):
    experiment = config.experiment
    model = config.model()
    grid = config.grid

    if experiment["Paths"] < 2:
        raise ConfigError(
            "Experiment :: Paths must be at least 2 for 'girsanov', not %i"
            % (experiment["Paths"],)
        )

    weights_seed = config.seed.named("weights")
    expectation_seed = config.seed.named("expectation")

    report = RunReport(
        "girsanov",
        seeds={
            "seed": config.seed.to_dict(),
            "weights": weights_seed.to_dict(),
            "expectation": expectation_seed.to_dict(),
        },
    )
    report.add("model", model.describe())
    report.add("grid", grid.to_dict())

    summary = expected_weight(model, grid, experiment["Samples"], weights_seed)
    report.add("weight", summary.to_dict())
    if model.kappa_bound == 0:
        report.check("mean_weight", summary.mean, 1.0, summary.mean == 1.0)
    else:
        report.check_max(
            "mean_weight", summary.deviation(), 3.0, note="|mean(Lambda) - 1| / stderr"
        )

    comparison = weighted_expectation(
        model,
        grid,
        experiment["Samples"],
        experiment["Paths"],
        expectation_seed,
        observable=experiment["Observable"],
        config=config.solver_config(),
        workers=config.workers,
    )
    report.add("expectation", comparison)

    difference = abs(comparison["weighted_mean"] - comparison["direct_mean"])
    if not difference:
        deviation = 0.0
    elif comparison["combined_stderr"]:
        deviation = difference / comparison["combined_stderr"]
    else:
        deviation = math.inf

    report.check_max(
        "expectation_agreement",
        deviation,
        4.0,
        note="|weighted - direct| / combined stderr",
    )

    return report


def main(argv):
    """Main function; takes a list of arguments but excluding sys.argv[0]."""
    return run_command("girsanov", argv, girsanov, description=__doc__)


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
