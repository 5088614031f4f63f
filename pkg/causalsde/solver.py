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
"""Successive approximation of the causal equation

    X(t) = c(w(t) - int_0^t kappa(X(s)) ds)

on a uniform grid, by Picard iteration of the map Phi_w. The same machinery
solves the variant with a time dependent kernel for fractional Brownian
drivers and the variant with a random initial condition xi added to the driver.
"""
import dataclasses
import logging
import math

from typing import List, Optional

import numpy as np

from causalsde.errors import CausalSDEError
from causalsde.models import ModelSpec, contraction_weight
from causalsde.paths import Grid, Path, check_hurst, check_same_grid


TRAPEZOID = "trapezoid"
LEFT = "left"
QUADRATURES = (TRAPEZOID, LEFT)

ANALYTIC_START = "analytic"
STRICT_START = "strict"


class SolverError(CausalSDEError):
    pass


class NoConvergence(SolverError):
    """Raised when Picard iteration fails; carries the iterate with the smallest
    residual and the diagnostics of the attempt."""

    def __init__(self, message, path, diagnostics):
        SolverError.__init__(self, message)
        self.path = path
        self.diagnostics = diagnostics


class KernelSingularity(SolverError):
    pass


@dataclasses.dataclass(frozen=True)
class SolverConfig:
    """Picard settings. 'lam' is the weight of the reporting norm; None selects
    the contraction weight of the model. Without an initial guess iteration
    starts from the constant path c(drive(0))."""

    tol: float = 1e-10
    max_iter: int = 200
    lam: Optional[float] = None
    quadrature: str = TRAPEZOID
    initial_guess: Optional[Path] = None
    singular_start: str = ANALYTIC_START

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tolerance must be > 0, not %r" % (self.tol,))
        elif self.max_iter < 1:
            raise ValueError("max_iter must be >= 1, not %r" % (self.max_iter,))
        elif self.lam is not None and not self.lam >= 0:
            raise ValueError("lambda must be >= 0, not %r" % (self.lam,))
        elif self.quadrature not in QUADRATURES:
            raise ValueError("unknown quadrature rule %r" % (self.quadrature,))
        elif self.singular_start not in (ANALYTIC_START, STRICT_START):
            raise ValueError("unknown singular start %r" % (self.singular_start,))

    def replace(self, **kwargs):
        return dataclasses.replace(self, **kwargs)


@dataclasses.dataclass
class SolveDiagnostics:
    """Record of one solve. 'gaps' are the norms ||x_{m+1} - x_m|| in the
    lambda-weighted norm, 'sup_gaps' the same at lambda = 0. 'iterations' is
    the index m of the returned iterate x_m; computing its residual takes one
    further application of Phi. 'drive' and 'integral' satisfy
    X = c(drive - integral) exactly."""

    grid: Grid
    iterations: int = 0
    gaps: List[float] = dataclasses.field(default_factory=list)
    sup_gaps: List[float] = dataclasses.field(default_factory=list)
    residual: float = math.inf
    converged: bool = False
    lam: float = 0.0
    quadrature: str = TRAPEZOID
    drive: Optional[np.ndarray] = dataclasses.field(default=None, repr=False)
    integral: Optional[np.ndarray] = dataclasses.field(default=None, repr=False)

    def to_dict(self):
        return {
            "iterations": self.iterations,
            "residual": self.residual,
            "converged": self.converged,
            "lambda": self.lam,
            "quadrature": self.quadrature,
            "gaps": list(self.gaps),
        }

    def gaps_decreasing(self, start=1, slack=1e-14):
        """True if the weighted gaps decrease after the first 'start' ones;
        increases below 'slack' are attributed to rounding."""
        gaps = self.gaps[start:]

        return all(after <= before + slack for before, after in zip(gaps, gaps[1:]))


########################################################################################
# Building blocks


def cell_integrals(values, dt, rule=TRAPEZOID):
    """Integrals of the sampled function over each grid cell."""
    values = np.asarray(values, dtype=float)
    if rule == TRAPEZOID:
        return 0.5 * (values[:-1] + values[1:]) * dt
    elif rule == LEFT:
        return values[:-1] * dt

    raise ValueError("unknown quadrature rule %r" % (rule,))


def accumulate(cells):
    """Running sums Q_k of cell integrals, with Q_0 = 0."""
    integral = np.zeros(len(cells) + 1)
    np.cumsum(cells, out=integral[1:])

    return integral


def running_quadrature(values, dt, rule=TRAPEZOID):
    """Q_k approximating the integral of the sampled function over [0, t_k].
    Node k of the result depends only on nodes 0..k of the input (0..k-1 for
    the left rule)."""
    return accumulate(cell_integrals(values, dt, rule))


def apply_phi(model: ModelSpec, w: Path, x: Path, quadrature=TRAPEZOID) -> Path:
    """Phi_w(x)(t_k) = c(w(t_k) - Q_k), Q being the running quadrature of
    kappa(x)."""
    grid = check_same_grid(w, x)
    integral = running_quadrature(model.kappa(x.values), grid.dt, quadrature)

    return Path(grid, model.c(w.values - integral))


def weighted_norm(x: Path, lam: float) -> float:
    """max_k exp(-lam * t_k) |x(t_k)|"""
    if not lam >= 0:
        raise ValueError("lambda must be >= 0, not %r" % (lam,))

    return _weighted_max(x.values, np.exp(-lam * x.times))


def _weighted_max(values, weights):
    return float(np.max(weights * np.abs(values)))


########################################################################################
# Picard iteration


def solve_fixed_point(model: ModelSpec, w: Path, config: Optional[SolverConfig] = None):
    """Returns (X, diagnostics) for the causal equation driven by w. Raises
    NoConvergence if max_iter is exhausted; DomainEscape is propagated."""
    config = config or SolverConfig()

    def _cells(values):
        return cell_integrals(model.kappa(values), w.grid.dt, config.quadrature)

    return _picard(model, w.grid, w.values, _cells, config)


def solve_with_random_initial(
    model: ModelSpec, w: Path, xi: float, config: Optional[SolverConfig] = None
):
    """Solves X(t) = c(xi + w(t) - int_0^t kappa(X(s)) ds); X(0) = c(xi) for
    drivers starting at 0. xi must not be drawn from the stream of w."""
    xi = float(xi)
    if not math.isfinite(xi):
        raise ValueError("initial condition must be finite, not %r" % (xi,))

    config = config or SolverConfig()

    def _cells(values):
        return cell_integrals(model.kappa(values), w.grid.dt, config.quadrature)

    return _picard(model, w.grid, xi + w.values, _cells, config)


def _picard(model, grid, drive, cells, config):
    """Iterates x_{m+1} = c(drive - Q(x_m)).

    The iterate x_m is accepted once ||x_m - x_{m-1}|| <= tol and its residual
    ||x_{m+1} - x_m|| <= tol (sup norms). Under the left rule the discrete
    system is triangular and iteration continues until the iterates are
    bit-for-bit stationary, so that node k of the result is a function of
    nodes 0..k of the driver alone.
    """
    log = logging.getLogger(__name__)
    times = grid.times
    lam = config.lam
    if lam is None:
        lam = contraction_weight(model, drive, grid.T)
    weights = np.exp(-lam * times)

    diagnostics = SolveDiagnostics(grid=grid, lam=lam, quadrature=config.quadrature)
    diagnostics.drive = drive

    if config.initial_guess is not None:
        if config.initial_guess.grid != grid:
            raise ValueError("initial guess is not on the grid of the driver")
        current = config.initial_guess.values
    else:
        current = np.full(grid.n + 1, model.c(drive[0]), dtype=float)

    settle = config.quadrature == LEFT
    # (iterate, its producing integral, residual, index)
    best = accepted = None
    previous_integral = previous_gap = None
    for iteration in range(1, config.max_iter + 2):
        integral = accumulate(cells(current))
        updated = np.asarray(model.c(drive - integral), dtype=float)
        if not np.all(np.isfinite(updated)):
            raise NoConvergence(
                "Picard iterate %i is not finite" % (iteration,),
                _best_path(grid, best),
                _finish(diagnostics, best),
            )

        difference = updated - current
        sup_gap = float(np.max(np.abs(difference)))
        diagnostics.sup_gaps.append(sup_gap)
        diagnostics.gaps.append(_weighted_max(difference, weights))

        if previous_integral is not None:
            candidate = (current, previous_integral, sup_gap, iteration - 1)
            if best is None or sup_gap < best[2]:
                best = candidate

            if previous_gap <= config.tol and sup_gap <= config.tol:
                accepted = candidate
                if not settle or sup_gap == 0:
                    break

        if iteration > config.max_iter:
            break

        previous_integral, previous_gap = integral, sup_gap
        current = updated

    if accepted is None:
        _finish(diagnostics, best)
        raise NoConvergence(
            "Picard iteration did not converge within %i iterations; best "
            "residual was %g" % (config.max_iter, diagnostics.residual),
            _best_path(grid, best),
            diagnostics,
        )
    elif settle and accepted[2]:
        log.debug("Left-rule iterates were within tolerance but did not settle")

    _finish(diagnostics, accepted)
    diagnostics.converged = True
    log.debug(
        "Converged after %i iterations with residual %g",
        diagnostics.iterations,
        diagnostics.residual,
    )

    return Path(grid, accepted[0]), diagnostics


def _finish(diagnostics, candidate):
    if candidate is not None:
        _, integral, residual, index = candidate
        diagnostics.integral = integral
        diagnostics.residual = residual
        diagnostics.iterations = index

    return diagnostics


def _best_path(grid, best):
    if best is None:
        return None

    return Path(grid, best[0])


def translated_path(diagnostics: SolveDiagnostics) -> Path:
    """The translated driver w~(t_k) = drive(t_k) - Q_k of a finished solve;
    X(t_k) = c(w~(t_k)) holds exactly at every node."""
    if diagnostics.integral is None:
        raise ValueError("diagnostics do not belong to a finished solve")

    return Path(diagnostics.grid, diagnostics.drive - diagnostics.integral)


########################################################################################
# Feedback ODE


def feedback_ode_offset(model: ModelSpec, w: Path, substeps=4) -> Path:
    """Explicit Euler integration of y' = kappa(c(w(t) - y)), y(0) = 0, using
    'substeps' steps per grid cell and linear interpolation of w."""
    if substeps < 1:
        raise ValueError("substeps must be >= 1, not %r" % (substeps,))

    grid = w.grid
    step = grid.dt / substeps
    drive = w.values

    offset = np.zeros(grid.n + 1)
    y = 0.0
    for k in range(grid.n):
        change = drive[k + 1] - drive[k]
        for sub in range(substeps):
            driver = drive[k] + (sub / substeps) * change
            y = y + step * float(model.kappa(model.c(driver - y)))

        offset[k + 1] = y

    return Path(grid, offset)


def solve_feedback_ode(model: ModelSpec, w: Path, substeps=4) -> Path:
    """Returns X(t_k) = c(w(t_k) - y(t_k)) for the feedback offset y."""
    offset = feedback_ode_offset(model, w, substeps)

    return Path(w.grid, model.c(w.values - offset.values))


########################################################################################
# Fractional Brownian drivers


def fbm_kernel(model: ModelSpec, H, t, x):
    """The kernel H t^(2H-1) g'(x) - f(x)/g(x), written as
    kappa(x) + (H t^(2H-1) - 1/2) g'(x), which equals kappa(x) exactly when
    H = 1/2 and stays defined where g vanishes."""
    check_hurst(H)
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        time_factor = H * t ** (2 * H - 1) - 0.5
        correction = np.where(time_factor == 0, 0.0, time_factor * model.g_prime(x))

    return _as_output(model.kappa(x) + correction)


def fbm_kernel_direct(model: ModelSpec, H, t, x):
    """H t^(2H-1) g'(x) - f(x)/g(x), evaluated as written."""
    check_hurst(H)
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        kernel = H * t ** (2 * H - 1) * model.g_prime(x) - model.f(x) / model.g(x)

    return _as_output(kernel)


def fbm_cell_integrals(
    model: ModelSpec, H, grid: Grid, values, rule=TRAPEZOID, strict=False
):
    """Cell integrals of the fBm kernel along the sampled path. For H < 1/2 the
    time factor is unbounded at t = 0; its integral over the first cell,
    dt^(2H)/2 - dt/2, is then taken analytically with g' frozen at the
    rule's value, unless 'strict' is set, in which case KernelSingularity is
    raised if g' does not vanish there."""
    times = grid.times
    values = np.asarray(values, dtype=float)
    slopes = np.asarray(model.g_prime(values), dtype=float)
    kernel = np.asarray(model.kappa(values), dtype=float)

    with np.errstate(divide="ignore", invalid="ignore"):
        time_factor = H * times ** (2 * H - 1) - 0.5
        correction = np.where(time_factor == 0, 0.0, time_factor * slopes)

    if H >= 0.5:
        return cell_integrals(kernel + correction, grid.dt, rule)

    if rule == TRAPEZOID:
        first_slope = 0.5 * (slopes[0] + slopes[1])
    else:
        first_slope = slopes[0]

    if strict and first_slope != 0:
        raise KernelSingularity(
            "kernel time factor diverges at t = 0 for H = %g and g'(x(0)) = %g"
            % (H, slopes[0])
        )

    correction[0] = 0.0
    corrections = cell_integrals(correction, grid.dt, rule)
    corrections[0] = first_slope * (grid.dt ** (2 * H) / 2 - grid.dt / 2)

    return cell_integrals(kernel, grid.dt, rule) + corrections


def solve_fixed_point_fbm(
    model: ModelSpec, bH: Path, H: float, config: Optional[SolverConfig] = None
):
    """Solves X(t) = c(B^H(t) - int_0^t kappa^H(s, X(s)) ds) for the kernel of
    fbm_kernel. At H = 1/2 the result equals that of solve_fixed_point."""
    check_hurst(H)
    config = config or SolverConfig()
    strict = config.singular_start == STRICT_START

    def _cells(values):
        return fbm_cell_integrals(model, H, bH.grid, values, config.quadrature, strict)

    return _picard(model, bH.grid, bH.values, _cells, config)


def _as_output(value):
    value = np.asarray(value)
    if value.ndim == 0:
        return float(value)

    return value
