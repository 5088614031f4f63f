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
"""The translated Wiener process, the Girsanov weight of the weak-solution
construction, and distribution functions of X_t obtained by composing the
distribution of the translated process with c^-1."""
import dataclasses
import logging
import math

from typing import Callable, Dict, Optional

import numpy as np
import scipy.stats

from causalsde.common.ensemble import map_ordered
from causalsde.common.timer import ProgressTimer
from causalsde.models import ModelSpec, kappa_composed
from causalsde.paths import Grid, Path, sample_wiener_ensemble
from causalsde.report import RunReport
from causalsde.solver import (
    TRAPEZOID,
    SolverConfig,
    running_quadrature,
    solve_fixed_point,
)


MIN_WEIGHT_SAMPLES = 100
# Rows of Brownian paths generated at a time when averaging weights
_BATCH_SIZE = 4096


def ks_critical_value(n_first, n_second=None):
    """Asymptotic 1% critical value of the two-sample Kolmogorov-Smirnov
    statistic; 1.63 * sqrt(2 / n) for samples of equal size n."""
    n_second = n_first if n_second is None else n_second

    return 1.63 * math.sqrt((n_first + n_second) / (n_first * n_second))


class EmpiricalCdf:
    """Right-continuous step function x -> #{samples <= x} / n."""

    def __init__(self, samples):
        samples = np.sort(np.asarray(samples, dtype=float).ravel())
        if not samples.size:
            raise ValueError("an empirical distribution needs at least one sample")
        elif not np.all(np.isfinite(samples)):
            raise ValueError("samples must be finite")

        samples.setflags(write=False)
        self.samples = samples

    @classmethod
    def from_samples(cls, samples):
        return cls(samples)

    def __len__(self):
        return len(self.samples)

    def __call__(self, x):
        counts = np.searchsorted(self.samples, x, side="right")
        result = counts / len(self.samples)
        if np.ndim(result) == 0:
            return float(result)

        return result

    def ks_distance(self, other):
        return float(scipy.stats.ks_2samp(self.samples, other.samples).statistic)


def composed_cdf(model: ModelSpec, tilde_samples) -> Callable:
    """The distribution function x -> F~(c^-1(x)) of X_t = c(w~(t)), where F~
    is the empirical distribution of the samples of w~(t)."""
    cdf = EmpiricalCdf(tilde_samples)

    def _composed(x):
        return cdf(model.c_inverse(x))

    return _composed


########################################################################################
# Translated Wiener process


def simulate_w_tilde(model: ModelSpec, w: Path) -> Path:
    """Euler discretization of dw~ = -kappa(c(w~)) dt + dw with w~(0) = 0."""
    values = simulate_w_tilde_ensemble(model, w.values, w.grid.dt)

    return Path(w.grid, values[0])


def simulate_w_tilde_ensemble(model: ModelSpec, drives, dt):
    """As simulate_w_tilde, for every row of an (n_paths, n + 1) array."""
    drives = np.atleast_2d(np.asarray(drives, dtype=float))
    increments = np.diff(drives, axis=1)

    values = np.zeros_like(drives)
    current = values[:, 0]
    for k in range(increments.shape[1]):
        current = current - kappa_composed(model, current) * dt + increments[:, k]
        values[:, k + 1] = current

    return values


def driver_from_translated(
    model: ModelSpec, w_tilde: Path, quadrature=TRAPEZOID
) -> Path:
    """w~ + int_0^t kappa(c(w~(s))) ds; the causal solution driven by this path
    is c(w~)."""
    integral = running_quadrature(
        kappa_composed(model, w_tilde.values), w_tilde.grid.dt, quadrature
    )

    return Path(w_tilde.grid, w_tilde.values + integral)


def weak_solution(model: ModelSpec, b: Path, quadrature=TRAPEZOID):
    """Returns (x_b, w) with x_b = c(b) and w = b + int_0^t kappa(c(b(s))) ds.
    Under the measure reweighted by the Girsanov weight of b, w is a Wiener
    process and x_b solves the diffusion equation driven by it."""
    return Path(b.grid, model.c(b.values)), driver_from_translated(model, b, quadrature)


########################################################################################
# Girsanov weights


@dataclasses.dataclass(frozen=True)
class WeightSummary:
    n_samples: int
    mean: float
    stderr: float
    minimum: float
    maximum: float

    def deviation(self):
        """|mean - 1| in units of the standard error (0 if both vanish)."""
        distance = abs(self.mean - 1.0)
        if not distance:
            return 0.0
        elif not self.stderr:
            return math.inf

        return distance / self.stderr

    def to_dict(self):
        return dataclasses.asdict(self)


def log_girsanov_weights(model: ModelSpec, paths, dt):
    """log Lambda for every row of an (n_paths, n + 1) array, using left
    endpoint (Ito) sums for both the db and the dt integral."""
    paths = np.atleast_2d(np.asarray(paths, dtype=float))
    integrand = np.asarray(kappa_composed(model, paths[:, :-1]), dtype=float)
    increments = np.diff(paths, axis=1)

    stochastic = np.sum(integrand * increments, axis=1)
    quadratic = np.sum(integrand * integrand, axis=1) * dt

    return -stochastic - 0.5 * quadratic


def girsanov_weight(model: ModelSpec, b: Path) -> float:
    """Lambda = exp(-int kappa(c(b)) db - 1/2 int kappa(c(b))^2 dt)"""
    return float(np.exp(log_girsanov_weights(model, b.values, b.grid.dt)[0]))


def log_weight_bound(model: ModelSpec, b: Path) -> float:
    """Upper bound of |log Lambda| implied by the kernel bound K."""
    bound = model.kappa_bound
    largest = float(np.max(np.abs(b.increments())))

    return bound * largest * b.grid.n + 0.5 * bound * bound * b.grid.T


def _weights(model, grid, n_samples, seed):
    weights = np.empty(n_samples)
    for start in range(0, n_samples, _BATCH_SIZE):
        count = min(_BATCH_SIZE, n_samples - start)
        paths = sample_wiener_ensemble(grid, count, seed, start)
        weights[start : start + count] = np.exp(
            log_girsanov_weights(model, paths, grid.dt)
        )

    return weights


def expected_weight(model: ModelSpec, grid: Grid, n_samples, seed) -> WeightSummary:
    """Monte-Carlo estimate of E[Lambda] over Brownian paths drawn from
    seed.child(0), seed.child(1), ..."""
    if n_samples < MIN_WEIGHT_SAMPLES:
        raise ValueError(
            "at least %i samples are required, not %i" % (MIN_WEIGHT_SAMPLES, n_samples)
        )

    weights = _weights(model, grid, n_samples, seed)
    summary = WeightSummary(
        n_samples=n_samples,
        mean=float(np.mean(weights)),
        stderr=float(np.std(weights, ddof=1) / math.sqrt(n_samples)),
        minimum=float(np.min(weights)),
        maximum=float(np.max(weights)),
    )

    logging.getLogger(__name__).info(
        "E[Lambda] = %.6f +/- %.2g over %i paths",
        summary.mean,
        summary.stderr,
        n_samples,
    )

    return summary


OBSERVABLES = {
    "identity": lambda x: np.asarray(x, dtype=float),
    "square": np.square,
    "tanh": np.tanh,
}


def weighted_expectation(
    model: ModelSpec,
    grid: Grid,
    n_samples,
    n_paths,
    seed,
    observable="tanh",
    config: Optional[SolverConfig] = None,
    workers=1,
) -> Dict[str, float]:
    """Compares E[Lambda * h(c(b(T)))] over n_samples Brownian paths b with the
    direct estimate E[h(X_T)] over n_paths causal solves; both estimate the
    expectation of h under the law of the diffusion at time T."""
    function = OBSERVABLES[observable]
    if n_samples < 2 or n_paths < 2:
        raise ValueError(
            "standard errors need at least 2 samples and 2 paths, not %i and %i"
            % (n_samples, n_paths)
        )

    weighted_seed = seed.named("weighted")
    weighted = np.empty(n_samples)
    for start in range(0, n_samples, _BATCH_SIZE):
        count = min(_BATCH_SIZE, n_samples - start)
        paths = sample_wiener_ensemble(grid, count, weighted_seed, start)
        weights = np.exp(log_girsanov_weights(model, paths, grid.dt))
        weighted[start : start + count] = weights * function(model.c(paths[:, -1]))

    direct_seed = seed.named("direct")
    _, direct = _final_values(model, grid, n_paths, direct_seed, config, workers)
    direct = function(direct)

    weighted_stderr = float(np.std(weighted, ddof=1) / math.sqrt(n_samples))
    direct_stderr = float(np.std(direct, ddof=1) / math.sqrt(n_paths))

    return {
        "observable": observable,
        "weighted_mean": float(np.mean(weighted)),
        "weighted_stderr": weighted_stderr,
        "direct_mean": float(np.mean(direct)),
        "direct_stderr": direct_stderr,
        "combined_stderr": math.hypot(weighted_stderr, direct_stderr),
    }


def _final_values(model, grid, n_paths, seed, config, workers, index=-1):
    """Returns the sampled drivers and X at node 'index' for each of them."""
    drives = sample_wiener_ensemble(grid, n_paths, seed)

    def _solve(row):
        path = Path(grid, drives[row])
        solution, _ = solve_fixed_point(model, path, config)

        return solution.values[index]

    timer = ProgressTimer(n_paths, desc="Causal solves")
    solutions = map_ordered(_solve, range(n_paths), workers, timer)

    return drives, np.array(solutions)


########################################################################################
# Distribution of X_t


def density_samples(
    model: ModelSpec,
    t,
    grid: Grid,
    n_samples,
    seed,
    config: Optional[SolverConfig] = None,
    workers=1,
):
    """Samples of X_t from causal solves, of c(w~(t)) from the translated
    process and of the raw driver w(t), all from independent streams."""
    index = grid.index_of(t)

    tilde_drives = sample_wiener_ensemble(grid, n_samples, seed.named("translated"))
    tilde = simulate_w_tilde_ensemble(model, tilde_drives, grid.dt)[:, index]

    drives, solutions = _final_values(
        model, grid, n_samples, seed.named("causal"), config, workers, index
    )

    return {
        "X": solutions,
        "w_tilde": tilde,
        "c_w_tilde": np.asarray(model.c(tilde), dtype=float),
        "w": drives[:, index],
    }


def cdf_comparison(
    model: ModelSpec,
    t,
    grid: Grid,
    n_samples,
    seed,
    config: Optional[SolverConfig] = None,
    workers=1,
    samples=None,
):
    """Two-sample KS statistic between X_t and c(w~(t)), that is between the
    law of X_t and F~ o c^-1, plus a report including the negative control of
    X_t against the raw driver w(t)."""
    if samples is None:
        samples = density_samples(model, t, grid, n_samples, seed, config, workers)

    critical = ks_critical_value(n_samples)
    result = scipy.stats.ks_2samp(samples["X"], samples["c_w_tilde"])
    control = scipy.stats.ks_2samp(samples["X"], samples["w"])

    statistic = float(result.statistic)
    composed = composed_cdf(model, samples["w_tilde"])
    direct = EmpiricalCdf(samples["X"])
    points = np.sort(samples["X"])
    sup_distance = float(np.max(np.abs(direct(points) - composed(points))))

    report = RunReport("density", seeds={"seed": seed.to_dict()})
    report.add("t", t)
    report.add("n_samples", n_samples)
    report.add("critical_value", critical)
    report.add("p_value", float(result.pvalue))
    report.add("negative_control_p_value", float(control.pvalue))
    report.add("composed_cdf_distance_at_samples", sup_distance)
    report.check(
        "ks_statistic",
        statistic,
        critical,
        statistic < critical,
        note="X_t against c(w~(t))",
    )
    report.check(
        "negative_control",
        float(control.statistic),
        critical,
        control.statistic > critical,
        note="X_t against w(t); must exceed the critical value",
    )

    return statistic, report
