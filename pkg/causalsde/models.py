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
"""Models of scalar diffusions dx = f(x)dt + g(x)dw in causal form.

Every model carries, besides f and g, the transform c solving c' = g(c) with
c(0) = x0 and the kernel kappa = g'/2 - f/g. The diffusion driven by a path w
is then the unique solution of X(t) = c(w(t) - int_0^t kappa(X(s)) ds).

Closed-form transforms are available for three families ('sinh', 'power' and
'unit'); any model with g > 0 may instead be built by tabulating c with a
fixed-step Runge-Kutta integration of c' = g(c).
"""
import dataclasses
import logging
import math

from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np

from scipy.interpolate import CubicHermiteSpline

from causalsde.errors import CausalSDEError
from causalsde.report import RunReport


CLOSED_FORM = "closed-form"
TABULATED = "tabulated-ODE"

# Arguments closer than this to a kink of c are never finite-differenced
_KINK_EXCLUSION = 1e-6
_FD_STEP = 1e-5
# Newton steps used to refine the inverse of a tabulated transform
_NEWTON_STEPS = 6
_ODE_GUARD = 1e15
_CONTRACTION_POINTS = 257


class ModelError(CausalSDEError):
    pass


class DivisionByZeroDiffusion(ModelError):
    pass


class OdeBlowup(ModelError):
    def __init__(self, message, reached):
        ModelError.__init__(self, message)
        self.reached = reached


class NonmonotoneC(ModelError):
    pass


class InvalidAlpha(ModelError):
    pass


class UnboundedKernel(ModelError):
    pass


class DomainEscape(ModelError):
    pass


@dataclasses.dataclass(frozen=True)
class OdeConfig:
    """Fixed RK4 step and half-width M of the argument interval [-M, M] on
    which c is tabulated."""

    step: float = 1e-3
    half_width: float = 10.0

    def __post_init__(self):
        if not (0 < self.step < self.half_width):
            raise ValueError("ODE step must be in (0, M), not %r" % (self.step,))


@dataclasses.dataclass(frozen=True)
class ModelSpec:
    """An immutable model; all functions accept scalars or numpy arrays.

    'singular_arguments' lists the arguments u at which c is not smooth, and
    'singular_states' the states x at which g is not continuously
    differentiable (or vanishes); both are excluded from numerical checks.
    """

    name: str
    f: Callable
    g: Callable
    g_prime: Callable
    c: Callable
    c_prime: Callable
    c_inverse: Callable
    kappa: Callable
    kappa_bound: float
    x0: float
    shift_a: float = 0.0
    domain: Tuple[float, float] = (-math.inf, math.inf)
    mode: str = CLOSED_FORM
    argument_range: Tuple[float, float] = (-math.inf, math.inf)
    singular_arguments: Tuple[float, ...] = ()
    singular_states: Tuple[float, ...] = ()
    parameters: Dict[str, Any] = dataclasses.field(default_factory=dict)

    @property
    def c_range(self):
        """The image of the argument range under c."""
        low, high = self.argument_range
        with np.errstate(over="ignore", invalid="ignore"):
            return (float(self.c(low)), float(self.c(high)))

    def with_kappa(self, kappa, kappa_bound, name=None):
        """Returns a copy with the kernel replaced; f and g are left as is, so
        the result is generally inconsistent and only of use as a control."""
        return dataclasses.replace(
            self,
            kappa=kappa,
            kappa_bound=float(kappa_bound),
            name=name or "%s+modified-kappa" % (self.name,),
        )

    def describe(self):
        return {
            "name": self.name,
            "mode": self.mode,
            "x0": self.x0,
            "kappa_bound": self.kappa_bound,
            "parameters": dict(self.parameters),
        }


########################################################################################
# Bounded kernels

_PHI = {
    "zero": (lambda x: np.zeros_like(np.asarray(x, dtype=float)), 0.0),
    "arctan": (np.arctan, math.pi / 2),
    "tanh": (np.tanh, 1.0),
    "sin": (np.sin, 1.0),
    "constant": (lambda x: np.ones_like(np.asarray(x, dtype=float)), 1.0),
}

PHI_NAMES = tuple(sorted(_PHI))


def make_phi(name, scale=1.0):
    """Returns (phi, bound) for the named builtin kernel, scaled by 'scale'."""
    try:
        func, bound = _PHI[name]
    except KeyError:
        raise ModelError(
            "unknown kernel %r; choose one of %s" % (name, ", ".join(PHI_NAMES))
        )

    scale = float(scale)
    if not math.isfinite(scale):
        raise UnboundedKernel("kernel scale must be finite, not %r" % (scale,))

    def _phi(x):
        return scale * func(x)

    return _phi, abs(scale) * bound


########################################################################################
# Catalog entries


@dataclasses.dataclass(frozen=True)
class CatalogEntry:
    """A closed-form model family: 'sinh' (g = sqrt(1 + x^2)), 'power'
    (g = |x|^alpha) or 'unit' (g = sigma). Parameter 'a' shifts the argument of
    c, and the kernel is the builtin 'phi' scaled by 'phi_scale'."""

    name: str
    a: float = 0.0
    alpha: float = 0.5
    sigma: float = 1.0
    phi: str = "arctan"
    phi_scale: float = 1.0

    def parameters(self):
        params = {"entry": self.name, "a": self.a, "phi": self.phi}
        params["phi_scale"] = self.phi_scale
        if self.name == "power":
            params["alpha"] = self.alpha
        elif self.name == "unit":
            params["sigma"] = self.sigma

        return params


def catalog_model(entry: CatalogEntry) -> ModelSpec:
    try:
        build = _CATALOG[entry.name]
    except KeyError:
        raise ModelError(
            "unknown catalog entry %r; choose one of %s"
            % (entry.name, ", ".join(CATALOG_NAMES))
        )

    phi, bound = make_phi(entry.phi, entry.phi_scale)
    model = build(entry, phi, bound)
    _check_kappa_bound(model, np.linspace(-10.0, 10.0, 2001))

    return model


def _sinh_model(entry, phi, bound):
    a = float(entry.a)

    def f(x):
        return x / 2 - phi(x) * np.sqrt(1 + np.square(x))

    def g(x):
        return np.sqrt(1 + np.square(x))

    def g_prime(x):
        return x / np.sqrt(1 + np.square(x))

    def c(u):
        return np.sinh(a + u)

    def c_prime(u):
        return np.cosh(a + u)

    def c_inverse(y):
        return np.arcsinh(y) - a

    return ModelSpec(
        name="sinh",
        f=f,
        g=g,
        g_prime=g_prime,
        c=c,
        c_prime=c_prime,
        c_inverse=c_inverse,
        kappa=phi,
        kappa_bound=bound,
        x0=float(np.sinh(a)),
        shift_a=a,
        parameters=entry.parameters(),
    )


def _power_model(entry, phi, bound):
    a = float(entry.a)
    alpha = float(entry.alpha)
    if not abs(alpha) < 1:
        raise InvalidAlpha("|alpha| must be < 1, not %r" % (entry.alpha,))

    exponent = 1 / (1 - alpha)

    def f(x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            diffusion = np.abs(x) ** alpha
            if alpha:
                correction = (alpha / 2) * np.sign(x) * np.abs(x) ** (2 * alpha - 1)
            else:
                correction = np.zeros_like(x)

            return _as_output(correction - diffusion * phi(x))

    def g(x):
        return np.abs(x) ** alpha

    def g_prime(x):
        x = np.asarray(x, dtype=float)
        if not alpha:
            return _as_output(np.zeros_like(x))

        with np.errstate(divide="ignore", invalid="ignore"):
            return _as_output(alpha * np.sign(x) * np.abs(x) ** (alpha - 1))

    def c(u):
        shifted = a + np.asarray(u, dtype=float)
        magnitude = ((1 - alpha) * np.abs(shifted)) ** exponent
        return _as_output(np.sign(shifted) * magnitude)

    def c_prime(u):
        shifted = a + np.asarray(u, dtype=float)
        with np.errstate(divide="ignore"):
            return _as_output(((1 - alpha) * np.abs(shifted)) ** (alpha * exponent))

    def c_inverse(y):
        y = np.asarray(y, dtype=float)
        return _as_output(np.sign(y) * np.abs(y) ** (1 - alpha) / (1 - alpha) - a)

    singular = alpha != 0

    return ModelSpec(
        name="power",
        f=f,
        g=g,
        g_prime=g_prime,
        c=c,
        c_prime=c_prime,
        c_inverse=c_inverse,
        kappa=phi,
        kappa_bound=bound,
        x0=float(c(0.0)),
        shift_a=a,
        singular_arguments=(-a,) if singular else (),
        singular_states=(0.0,) if singular else (),
        parameters=entry.parameters(),
    )


def _unit_model(entry, phi, bound):
    a = float(entry.a)
    sigma = float(entry.sigma)
    if not sigma > 0:
        raise ModelError("sigma must be > 0, not %r" % (entry.sigma,))

    def f(x):
        return -sigma * phi(x)

    def g(x):
        return _as_output(np.full_like(np.asarray(x, dtype=float), sigma))

    def g_prime(x):
        return _as_output(np.zeros_like(np.asarray(x, dtype=float)))

    def c(u):
        return sigma * (a + u)

    def c_prime(u):
        return _as_output(np.full_like(np.asarray(u, dtype=float), sigma))

    def c_inverse(y):
        return y / sigma - a

    return ModelSpec(
        name="unit",
        f=f,
        g=g,
        g_prime=g_prime,
        c=c,
        c_prime=c_prime,
        c_inverse=c_inverse,
        kappa=phi,
        kappa_bound=bound,
        x0=sigma * a,
        shift_a=a,
        parameters=entry.parameters(),
    )


_CATALOG = {
    "sinh": _sinh_model,
    "power": _power_model,
    "unit": _unit_model,
}

CATALOG_NAMES = tuple(sorted(_CATALOG))


def identity_model():
    """c = id and kappa = 0, so the solution of the causal equation is the
    driver itself."""
    return catalog_model(CatalogEntry("unit", phi="zero"))


########################################################################################
# Models from (f, g)


def kappa_from_fg(f, g, g_prime, x):
    """Returns g'(x)/2 - f(x)/g(x); x may be a scalar or an array."""
    diffusion = np.asarray(g(x), dtype=float)
    if np.any(diffusion == 0):
        raise DivisionByZeroDiffusion(
            "g vanishes at x = %s; supply the kernel directly"
            % (_first(np.asarray(x, dtype=float)[diffusion == 0]),)
        )

    return _as_output(np.asarray(g_prime(x)) / 2 - np.asarray(f(x)) / diffusion)


def build_model_from_fg(
    f,
    g,
    g_prime,
    x0,
    domain=(-math.inf, math.inf),
    ode_config: Optional[OdeConfig] = None,
    *,
    kappa_bound,
    kappa=None,
    name="tabulated",
    parameters=None,
) -> ModelSpec:
    """Tabulates c' = g(c), c(0) = x0 by classical RK4 on [-M, M] and
    interpolates between nodes with a monotone cubic Hermite spline using the
    exact slopes g(c). The kernel defaults to g'/2 - f/g; a bounded kernel
    supplied by the caller takes precedence."""
    ode_config = ode_config or OdeConfig()
    low, high = domain
    if not (low < x0 < high):
        raise ModelError("x0 = %r lies outside the domain %r" % (x0, domain))

    forward_u, forward_c = _integrate_rk4(g, x0, ode_config, +1.0, domain)
    backward_u, backward_c = _integrate_rk4(g, x0, ode_config, -1.0, domain)

    nodes = np.concatenate([backward_u[:0:-1], forward_u])
    values = np.concatenate([backward_c[:0:-1], forward_c])
    if not np.all(np.diff(values) > 0):
        raise NonmonotoneC("tabulated c is not strictly increasing")

    transform = TabulatedTransform(nodes, values, np.asarray(g(values), dtype=float))

    if kappa is None:

        def kappa(x):
            return kappa_from_fg(f, g, g_prime, x)

    params = dict(parameters or {})
    params.update(ode_step=ode_config.step, ode_half_width=ode_config.half_width)

    model = ModelSpec(
        name=name,
        f=f,
        g=g,
        g_prime=g_prime,
        c=transform,
        c_prime=transform.derivative,
        c_inverse=transform.inverse,
        kappa=kappa,
        kappa_bound=float(kappa_bound),
        x0=float(x0),
        domain=(float(low), float(high)),
        mode=TABULATED,
        argument_range=transform.argument_range,
        parameters=params,
    )

    _check_kappa_bound(model, nodes)
    logging.getLogger(__name__).debug(
        "Tabulated c for %r on [%g, %g] using %i nodes",
        name,
        nodes[0],
        nodes[-1],
        len(nodes),
    )

    return model


def tabulated_catalog_model(entry: CatalogEntry, ode_config=None) -> ModelSpec:
    """Builds the (f, g) of a catalog entry by tabulation, keeping its kernel."""
    closed = catalog_model(entry)

    return build_model_from_fg(
        closed.f,
        closed.g,
        closed.g_prime,
        closed.x0,
        closed.domain,
        ode_config,
        kappa=closed.kappa,
        kappa_bound=closed.kappa_bound,
        name=closed.name,
        parameters=closed.parameters,
    )


def _integrate_rk4(g, x0, config, direction, domain):
    """Runs RK4 from u = 0 towards direction * M. Arguments are accumulated with
    the same additions as the values, so that g = 1 yields c(u) = u exactly."""
    h = direction * config.step
    nsteps = int(round(config.half_width / config.step))
    low, high = domain

    arguments = np.empty(nsteps + 1)
    values = np.empty(nsteps + 1)
    arguments[0] = u = 0.0
    values[0] = x = float(x0)

    def _slope(value):
        slope = float(g(value))
        if not slope > 0:
            raise NonmonotoneC(
                "g(%r) = %r; g must be positive on the traversed range" % (value, slope)
            )
        return slope

    with np.errstate(over="ignore", invalid="ignore"):
        for step in range(1, nsteps + 1):
            k1 = _slope(x)
            k2 = _slope(x + h / 2 * k1)
            k3 = _slope(x + h / 2 * k2)
            k4 = _slope(x + h * k3)

            x = x + h * (k1 + 2 * k2 + 2 * k3 + k4) / 6
            u = u + h

            if not (math.isfinite(x) and abs(x) < _ODE_GUARD and low < x < high):
                reached = sorted((0.0, float(arguments[step - 1])))
                raise OdeBlowup(
                    "c escaped the domain at u = %g; tabulated only on [%g, %g]"
                    % (u, reached[0], reached[1]),
                    reached=tuple(reached),
                )

            arguments[step] = u
            values[step] = x

    return arguments, values


class TabulatedTransform:
    """Monotone cubic Hermite interpolation of a tabulated increasing function,
    with derivative and inverse. Node slopes are limited as proposed by
    Fritsch and Carlson, which leaves slopes of smooth data untouched. Both the
    function and its inverse raise DomainEscape outside the table."""

    def __init__(self, nodes, values, slopes):
        self.nodes = np.asarray(nodes, dtype=float)
        self.values = np.asarray(values, dtype=float)
        slopes = _limit_slopes(self.nodes, self.values, np.asarray(slopes, dtype=float))

        self._spline = CubicHermiteSpline(
            self.nodes, self.values, slopes, extrapolate=False
        )
        self._derivative = self._spline.derivative()

    @property
    def argument_range(self):
        return (float(self.nodes[0]), float(self.nodes[-1]))

    @property
    def value_range(self):
        return (float(self.values[0]), float(self.values[-1]))

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        _check_within(u, self.argument_range, "argument of c")

        return _as_output(self._spline(u))

    def derivative(self, u):
        u = np.asarray(u, dtype=float)
        _check_within(u, self.argument_range, "argument of c'")

        return _as_output(self._derivative(u))

    def inverse(self, y):
        y = np.asarray(y, dtype=float)
        _check_within(y, self.value_range, "argument of c^-1")

        last = len(self.nodes) - 2
        idx = np.clip(np.searchsorted(self.values, y, side="right") - 1, 0, last)
        u_lo, u_hi = self.nodes[idx], self.nodes[idx + 1]
        v_lo, v_hi = self.values[idx], self.values[idx + 1]

        u = u_lo + (y - v_lo) * (u_hi - u_lo) / (v_hi - v_lo)
        for _ in range(_NEWTON_STEPS):
            u = np.clip(u - (self._spline(u) - y) / self._derivative(u), u_lo, u_hi)

        return _as_output(u)


def _limit_slopes(nodes, values, slopes):
    secants = np.diff(values) / np.diff(nodes)
    alpha = slopes[:-1] / secants
    beta = slopes[1:] / secants
    radius = np.hypot(alpha, beta)
    scale = np.where(radius > 3.0, 3.0 / np.maximum(radius, 3.0), 1.0)

    limited = slopes.copy()
    limited[:-1] = np.minimum(limited[:-1], slopes[:-1] * scale)
    limited[1:] = np.minimum(limited[1:], slopes[1:] * scale)

    return limited


def _check_within(values, bounds, what):
    low, high = bounds
    inside = (values >= low) & (values <= high)
    if not np.all(inside):
        offending = _first(values[~inside])
        raise DomainEscape(
            "%s = %r lies outside the tabulated interval [%g, %g]"
            % (what, offending, low, high)
        )


########################################################################################
# Derived quantities and verification


def kappa_composed(model: ModelSpec, u):
    """Returns kappa(c(u))."""
    return model.kappa(model.c(u))


def contraction_weight(model: ModelSpec, drive, horizon):
    """Returns lambda = 2 * L_c * K, where L_c is the largest slope of c sampled
    on [min drive - K * T, max drive + K * T]. Arguments next to kinks of c are
    skipped, and lambda is capped so that exp(-lambda * T) stays representable."""
    drive = np.asarray(drive, dtype=float)
    bound = model.kappa_bound
    if bound == 0:
        return 0.0

    low, high = model.argument_range
    low = max(low, float(np.min(drive)) - bound * horizon)
    high = min(high, float(np.max(drive)) + bound * horizon)

    arguments = np.linspace(low, high, _CONTRACTION_POINTS)
    arguments = _away_from(arguments, model.singular_arguments)
    slopes = np.asarray(model.c_prime(arguments), dtype=float)
    lipschitz = float(np.max(slopes[np.isfinite(slopes)], initial=0.0))

    return min(2 * lipschitz * bound, 700.0 / horizon)


def verify_model(model: ModelSpec, test_grid, tol_model=1e-6, fd_step=_FD_STEP):
    """Checks c' = g(c) (analytically and by centered finite differences), the
    kernel against g'/2 - f/g, the inverse of c and the declared kernel bound
    on the test grid. Failures are recorded in the returned report."""
    report = RunReport("verify")
    report.add("model", model.describe())

    arguments = np.asarray(test_grid, dtype=float)
    low, high = model.argument_range
    arguments = arguments[(arguments >= low) & (arguments <= high)]
    arguments = _away_from(arguments, model.singular_arguments)
    report.add("points", len(arguments))

    # Steps shrink near kinks so that no difference quotient straddles one
    steps = np.full_like(arguments, fd_step)
    for point in model.singular_arguments:
        steps = np.minimum(steps, 0.25 * np.abs(arguments - point))
    steps = np.minimum(steps, 0.25 * np.minimum(arguments - low, high - arguments))
    fd_mask = steps > 0

    states = np.asarray(model.c(arguments), dtype=float)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        diffusion = np.asarray(model.g(states), dtype=float)
        slopes = np.asarray(model.c_prime(arguments), dtype=float)

        fd_args, fd_steps = arguments[fd_mask], steps[fd_mask]
        quotients = (model.c(fd_args + fd_steps) - model.c(fd_args - fd_steps)) / (
            2 * fd_steps
        )

        kernel_mask = (diffusion != 0) & np.isfinite(diffusion)
        kernel_mask &= _away_mask(states, model.singular_states, 0.0)
        kernel_states = states[kernel_mask]
        kernel = np.asarray(model.kappa(kernel_states), dtype=float)
        drift_term = model.f(kernel_states) / diffusion[kernel_mask]
        expected = model.g_prime(kernel_states) / 2 - drift_term

        inverse = np.asarray(model.c_inverse(states), dtype=float)
        kernel_all = np.abs(np.asarray(model.kappa(states), dtype=float))

    report.check_max(
        "transform", _max_abs(slopes - diffusion), tol_model, note="|c' - g(c)|"
    )
    report.check_max(
        "transform_fd",
        _max_abs(quotients - diffusion[fd_mask]),
        tol_model,
        note="|(c(u+h) - c(u-h))/2h - g(c(u))|",
    )
    report.check_max(
        "kappa", _max_abs(kernel - expected), tol_model, note="|kappa - (g'/2 - f/g)|"
    )
    report.check_max(
        "inverse", _max_abs(inverse - arguments), tol_model, note="|c^-1(c(u)) - u|"
    )
    report.check_max(
        "kappa_bound",
        _max_abs(kernel_all),
        model.kappa_bound,
        note="sup |kappa| against the declared bound",
    )

    return report


def _check_kappa_bound(model, arguments):
    arguments = _away_from(np.asarray(arguments, dtype=float), model.singular_arguments)
    with np.errstate(over="ignore", invalid="ignore"):
        states = np.asarray(model.c(arguments), dtype=float)
        states = states[np.isfinite(states)]
        observed = _max_abs(np.asarray(model.kappa(states), dtype=float))

    if not (observed <= model.kappa_bound * (1 + 1e-12)):
        raise UnboundedKernel(
            "sup |kappa| = %r exceeds the declared bound %r"
            % (observed, model.kappa_bound)
        )


def _away_mask(values, points, distance=_KINK_EXCLUSION):
    mask = np.ones(values.shape, dtype=bool)
    for point in points:
        mask &= np.abs(values - point) > distance

    return mask


def _away_from(values, points):
    return values[_away_mask(values, points)]


def _max_abs(values):
    values = np.asarray(values, dtype=float)
    if not values.size:
        return 0.0

    return float(np.max(np.abs(values)))


def _first(values):
    return float(np.ravel(values)[0])


def _as_output(value):
    value = np.asarray(value)
    if value.ndim == 0:
        return float(value)

    return value
