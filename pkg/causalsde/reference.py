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
"""Euler-Maruyama and Milstein schemes for dx = f(x)dt + g(x)dw, driven by the
increments of a given path, and strong convergence studies comparing them with
the causal construction on shared Brownian paths."""
import dataclasses
import logging
import math

from typing import List, Optional

import numpy as np
import pandas as pd

from causalsde.common.ensemble import map_ordered
from causalsde.common.timer import ProgressTimer
from causalsde.errors import CausalSDEError
from causalsde.models import ModelSpec
from causalsde.paths import Grid, GridMismatch, Path, check_same_grid, sample_wiener
from causalsde.solver import SolverConfig, solve_fixed_point


DEFAULT_GUARD = 1e8

EULER = "euler"
MILSTEIN = "milstein"
SCHEMES = (EULER, MILSTEIN)


class NumericalBlowup(CausalSDEError):
    def __init__(self, message, step):
        CausalSDEError.__init__(self, message)
        self.step = step


def euler_maruyama(model: ModelSpec, w: Path, x0=None, guard=DEFAULT_GUARD) -> Path:
    """x_{k+1} = x_k + f(x_k) dt + g(x_k) (w(t_{k+1}) - w(t_k)), x_0 = x0
    (defaulting to c(0))."""
    return _integrate_path(model, w, x0, guard, EULER)


def milstein(model: ModelSpec, w: Path, x0=None, guard=DEFAULT_GUARD) -> Path:
    """Euler-Maruyama plus the correction g(x_k) g'(x_k) (dw_k^2 - dt) / 2."""
    return _integrate_path(model, w, x0, guard, MILSTEIN)


def _integrate_path(model, w, x0, guard, scheme):
    dt = w.grid.dt
    drive = w.values
    x = model.x0 if x0 is None else float(x0)

    values = np.empty_like(drive)
    values[0] = x
    for k in range(w.grid.n):
        dw = drive[k + 1] - drive[k]
        diffusion = model.g(x)
        if scheme == MILSTEIN:
            correction = 0.5 * diffusion * model.g_prime(x) * (dw * dw - dt)
            x = x + model.f(x) * dt + diffusion * dw + correction
        else:
            x = x + model.f(x) * dt + diffusion * dw

        if not (abs(x) <= guard):
            raise NumericalBlowup(
                "%s iterate exceeded %g at step %i" % (scheme, guard, k + 1), k + 1
            )

        values[k + 1] = x

    return Path(w.grid, values)


def integrate_ensemble(
    model: ModelSpec, drives, dt, x0=None, scheme=EULER, guard=DEFAULT_GUARD
):
    """Applies a scheme to every row of an (n_paths, n + 1) array of driver
    values at once; returns an array of the same shape."""
    if scheme not in SCHEMES:
        raise ValueError("unknown scheme %r" % (scheme,))

    drives = np.atleast_2d(np.asarray(drives, dtype=float))
    increments = np.diff(drives, axis=1)

    values = np.empty_like(drives)
    x = np.full(drives.shape[0], model.x0 if x0 is None else float(x0))
    values[:, 0] = x
    for k in range(increments.shape[1]):
        dw = increments[:, k]
        diffusion = model.g(x)
        step = x + model.f(x) * dt + diffusion * dw
        if scheme == MILSTEIN:
            step = step + 0.5 * diffusion * model.g_prime(x) * (dw * dw - dt)
        x = step

        if not np.all(np.abs(x) <= guard):
            raise NumericalBlowup(
                "%s iterate exceeded %g at step %i" % (scheme, guard, k + 1), k + 1
            )

        values[:, k + 1] = x

    return values


def strong_error(x: Path, y: Path) -> float:
    """max_k |x(t_k) - y(t_k)|"""
    check_same_grid(x, y)

    return float(np.max(np.abs(x.values - y.values)))


########################################################################################
# Convergence studies


@dataclasses.dataclass(frozen=True)
class ConvergenceRow:
    n: int
    dt: float
    mean_error: float
    max_error: float
    paths: int
    failures: int = 0


@dataclasses.dataclass
class ConvergenceTable:
    rows: List[ConvergenceRow]
    slope: Optional[float]
    reference: str = EULER

    def __post_init__(self):
        self.rows = sorted(self.rows, key=lambda row: row.n)

    @property
    def failures(self):
        """Failed paths; every row counts the same dropped paths."""
        return max((row.failures for row in self.rows), default=0)

    def mean_errors(self):
        return [row.mean_error for row in self.rows]

    def strictly_decreasing(self):
        errors = self.mean_errors()

        return all(after < before for before, after in zip(errors, errors[1:]))

    def to_frame(self):
        return pd.DataFrame(
            {
                "n": [row.n for row in self.rows],
                "dt": [row.dt for row in self.rows],
                "mean_err": [row.mean_error for row in self.rows],
                "max_err": [row.max_error for row in self.rows],
                "paths": [row.paths for row in self.rows],
                "failures": [row.failures for row in self.rows],
            }
        )

    def write_csv(self, filename):
        """Writes one row per grid, followed by a footer row holding the slope."""
        with open(filename, "w") as handle:
            self.to_frame().to_csv(handle, index=False, float_format="%.10g")
            slope = "NA" if self.slope is None else "%.10g" % (self.slope,)
            handle.write("slope,%s,,,,\n" % (slope,))

    def to_dict(self):
        return {
            "reference": self.reference,
            "slope": self.slope,
            "rows": [dataclasses.asdict(row) for row in self.rows],
        }


def fit_slope(steps, errors):
    """Least-squares slope of log(error) against log(step). Returns None if an
    error is zero (or not finite), since the log-log fit is then undefined."""
    steps = np.asarray(steps, dtype=float)
    errors = np.asarray(errors, dtype=float)
    if len(steps) < 2:
        raise ValueError("a slope needs at least 2 grids, not %i" % (len(steps),))
    elif not np.all(np.isfinite(errors) & (errors > 0)):
        return None

    slope, _ = np.polyfit(np.log(steps), np.log(errors), 1)

    return float(slope)


def check_refinements(n_list):
    """Checks that the step counts increase and all divide the finest one."""
    n_list = [int(n) for n in n_list]
    if not n_list:
        raise ValueError("no step counts given")
    elif any(after <= before for before, after in zip(n_list, n_list[1:])):
        raise ValueError("step counts must be strictly increasing: %r" % (n_list,))

    finest = n_list[-1]
    for n in n_list:
        if n < 1 or finest % n:
            raise GridMismatch("%i steps do not divide %i steps" % (n, finest))

    return n_list


def convergence_study(
    model: ModelSpec,
    n_list,
    n_paths,
    seed,
    T=1.0,
    config: Optional[SolverConfig] = None,
    reference=EULER,
    workers=1,
) -> ConvergenceTable:
    """Strong error between the causal construction and a reference scheme.

    Path i is sampled once on the finest grid from seed.child(i) and restricted
    to every coarser grid, so all rows share the same Brownian paths. A path for
    which either construction fails on any grid is dropped from every row and
    counted once as a failure.
    """
    n_list = check_refinements(n_list)
    if len(n_list) < 2:
        raise ValueError("a slope needs at least 2 grids, not %i" % (len(n_list),))
    elif reference not in SCHEMES:
        raise ValueError("unknown reference scheme %r" % (reference,))

    log = logging.getLogger(__name__)
    fine = Grid(T, n_list[-1])
    config = config or SolverConfig()

    def _errors(index):
        driver = sample_wiener(fine, seed.child(index))
        scheme = milstein if reference == MILSTEIN else euler_maruyama
        errors = []
        for n in n_list:
            w = driver.restrict(n)
            try:
                causal, _ = solve_fixed_point(model, w, config)
                errors.append(strong_error(causal, scheme(model, w)))
            except CausalSDEError as error:
                log.warning("Path %i failed at n=%i: %s", index, n, error)
                return None

        return errors

    timer = ProgressTimer(n_paths, desc="Convergence study")
    per_path = map_ordered(_errors, range(n_paths), workers, timer)

    completed = [errors for errors in per_path if errors is not None]
    failures = n_paths - len(completed)

    rows = []
    for column, n in enumerate(n_list):
        errors = [errors[column] for errors in completed]
        if errors:
            mean_error = math.fsum(errors) / len(errors)
            max_error = max(errors)
        else:
            mean_error = max_error = math.nan

        row = ConvergenceRow(n, T / n, mean_error, max_error, len(errors), failures)
        rows.append(row)

    slope = fit_slope([row.dt for row in rows], [row.mean_error for row in rows])

    return ConvergenceTable(rows=rows, slope=slope, reference=reference)
