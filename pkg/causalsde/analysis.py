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
"""Recovery of the driving Wiener path from an observed diffusion path, by
inverting X(t) = c(w(t) - int_0^t kappa(X(s)) ds) node by node."""
import dataclasses

import numpy as np
import pandas as pd

from causalsde.errors import CausalSDEError
from causalsde.models import ModelSpec
from causalsde.paths import Path, check_same_grid
from causalsde.solver import TRAPEZOID, running_quadrature


class InverseDomainError(CausalSDEError):
    def __init__(self, message, index):
        CausalSDEError.__init__(self, message)
        self.index = index


def recover_driver(model: ModelSpec, x: Path, quadrature=TRAPEZOID) -> Path:
    """Returns w(t_k) = c^-1(x(t_k)) + Q_k, Q being the running quadrature of
    kappa(x) under the same rule as the forward solver."""
    low, high = model.c_range
    outside = np.flatnonzero((x.values < low) | (x.values > high))
    if outside.size:
        index = int(outside[0])
        raise InverseDomainError(
            "x(t_%i) = %r lies outside the range [%g, %g] of c"
            % (index, x.values[index], low, high),
            index=index,
        )

    integral = running_quadrature(model.kappa(x.values), x.grid.dt, quadrature)

    return Path(x.grid, model.c_inverse(x.values) + integral)


@dataclasses.dataclass(frozen=True)
class AlignedPair:
    """An input path and the output it drives, aligned node by node."""

    driver: Path
    output: Path

    def __post_init__(self):
        check_same_grid(self.driver, self.output)

    def to_frame(self):
        return pd.DataFrame(
            {
                "t": self.driver.times,
                "input": self.driver.values,
                "output": self.output.values,
            }
        )

    def write_csv(self, filename):
        self.to_frame().to_csv(filename, index=False, float_format="%.17g")


def co_driven_pairing(model_x: ModelSpec, x: Path, y: Path, quadrature=TRAPEZOID):
    """Recovers w from the observed x and pairs it with y. That x and y are
    driven by the same Wiener process is an assumption of the caller; it
    cannot be checked from the data."""
    check_same_grid(x, y)
    driver = recover_driver(model_x, x, quadrature)

    return driver, AlignedPair(driver, y)
