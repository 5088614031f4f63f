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
"""Compares the distribution of X_t obtained by causal solves with the
distribution of c(w~(t)) obtained from the translated Wiener process."""
import sys

import pandas as pd

from causalsde.measure import cdf_comparison, density_samples
from causalsde.tools.common import run_command


def density(config):
    experiment = config.experiment
    model = config.model()
    grid = config.grid
    seed = config.seed.named("density")
    t = experiment["Time"]
    n_samples = experiment["Samples"]
    solver = config.solver_config()

    samples = density_samples(model, t, grid, n_samples, seed, solver, config.workers)
    if experiment["DumpSamples"]:
        table = pd.DataFrame(samples)
        table.to_csv(
            config.output_path("density_samples.csv"), index=False, float_format="%.17g"
        )

    _, report = cdf_comparison(
        model, t, grid, n_samples, seed, solver, config.workers, samples=samples
    )
    report.seeds["root"] = config.seed.to_dict()
    report.add("model", model.describe())

    return report


def main(argv):
    """Main function; takes a list of arguments but excluding sys.argv[0]."""
    return run_command("density", argv, density, description=__doc__)


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
