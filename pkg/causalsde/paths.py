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
"""Uniform time grids, sampled paths and seeded path generators.

Sampled Wiener and fractional Brownian paths are rounded to the dyadic lattice
2^-36. Sums and differences of lattice values below 2^16 in magnitude are
exact in double precision, so increments recovered by differencing a path add
back up to the path bit-for-bit; the rounding is far below any statistical or
discretization error.
"""
import dataclasses
import functools
import logging
import math
import zlib

from typing import Tuple

import numpy as np
import pandas as pd
import scipy.linalg

from causalsde.errors import CausalSDEError


# Dense covariance factorization is only attempted up to this many steps
MAX_FBM_STEPS = 4096

_LATTICE = 2.0 ** -36
_NODE_TOLERANCE = 1e-9


class PathError(CausalSDEError):
    pass


class InvalidHurst(PathError):
    pass


class FactorizationFailure(PathError):
    def __init__(self, message, smallest_eigenvalue):
        PathError.__init__(self, message)
        self.smallest_eigenvalue = smallest_eigenvalue


class GridMismatch(PathError):
    pass


class GridTooLarge(PathError):
    pass


@dataclasses.dataclass(frozen=True)
class Grid:
    """Uniform grid t_k = k * T / n, k = 0..n, on [0, T]."""

    T: float
    n: int

    def __post_init__(self):
        if not (math.isfinite(self.T) and self.T > 0):
            raise ValueError("grid horizon must be finite and > 0, not %r" % (self.T,))
        elif isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise ValueError("grid must have at least 1 step, not %r" % (self.n,))

        object.__setattr__(self, "T", float(self.T))
        object.__setattr__(self, "n", int(self.n))

    @property
    def dt(self):
        return self.T / self.n

    @property
    def times(self):
        times = np.arange(self.n + 1) * self.dt
        times[-1] = self.T

        return times

    def restrict(self, n):
        """Returns the coarser grid with n steps whose nodes are nodes of this
        grid; n must divide the number of steps."""
        if n < 1 or self.n % n:
            raise GridMismatch("%i steps do not divide %i steps" % (n, self.n))

        return Grid(self.T, n)

    def index_of(self, t):
        """Returns k such that t_k = t; t must be a node of the grid."""
        k = int(round(t / self.dt))
        if not (0 <= k <= self.n) or abs(k * self.dt - t) > _NODE_TOLERANCE * self.T:
            raise ValueError("t = %r is not a node of %s" % (t, self))

        return k

    def to_dict(self):
        return {"T": self.T, "n": self.n}


class Path:
    """A real function sampled at the nodes of a grid; values are immutable."""

    __slots__ = ("grid", "values")

    def __init__(self, grid: Grid, values):
        values = np.array(values, dtype=float)
        if values.shape != (grid.n + 1,):
            raise GridMismatch(
                "path has shape %r, but the grid has %i nodes"
                % (values.shape, grid.n + 1)
            )
        elif not np.all(np.isfinite(values)):
            raise PathError("path contains non-finite values")

        values.setflags(write=False)
        self.grid = grid
        self.values = values

    @property
    def times(self):
        return self.grid.times

    def increments(self):
        return np.diff(self.values)

    def restrict(self, n):
        grid = self.grid.restrict(n)

        return Path(grid, self.values[:: self.grid.n // n])

    def to_frame(self, name="value"):
        return pd.DataFrame({"t": self.times, name: self.values})

    def write_csv(self, filename, name="value"):
        self.to_frame(name).to_csv(filename, index=False, float_format="%.17g")

    @classmethod
    def read_csv(cls, filename, column="value"):
        """Reads a path from a CSV file with a column 't' holding uniformly
        spaced times starting at 0, and the named value column."""
        table = pd.read_csv(filename)
        for key in ("t", column):
            if key not in table.columns:
                raise PathError("column %r not found in %r" % (key, str(filename)))

        times = table["t"].to_numpy(dtype=float)
        if len(times) < 2 or times[0] != 0:
            raise PathError("%r must start at t = 0 with at least 2 rows" % (filename,))

        grid = Grid(times[-1], len(times) - 1)
        if np.max(np.abs(times - grid.times)) > _NODE_TOLERANCE * grid.T:
            raise PathError("times in %r are not uniformly spaced" % (str(filename),))

        return cls(grid, table[column].to_numpy(dtype=float))

    def __len__(self):
        return len(self.values)

    def __repr__(self):
        return "Path(%r, n=%i)" % (self.grid, self.grid.n)


def check_same_grid(*paths):
    grid = paths[0].grid
    for path in paths[1:]:
        if path.grid != grid:
            raise GridMismatch("paths on %s and %s" % (grid, path.grid))

    return grid


@dataclasses.dataclass(frozen=True)
class Seed:
    """A 64-bit seed plus a stream id; every (value, stream) pair yields an
    independent, reproducible counter-based generator."""

    value: int
    stream: Tuple[int, ...] = ()

    def __post_init__(self):
        if not (0 <= self.value < 2 ** 64):
            raise ValueError(
                "seed must be an unsigned 64-bit integer: %r" % (self.value,)
            )

        object.__setattr__(self, "stream", tuple(int(key) for key in self.stream))

    def child(self, index):
        return Seed(self.value, self.stream + (int(index),))

    def named(self, name):
        return self.child(zlib.crc32(name.encode("utf-8")))

    def generator(self):
        sequence = np.random.SeedSequence(self.value, spawn_key=self.stream)

        return np.random.Generator(np.random.Philox(sequence))

    @classmethod
    def from_entropy(cls):
        return cls(int(np.random.SeedSequence().generate_state(1, np.uint64)[0]))

    def to_dict(self):
        return {"value": self.value, "stream": list(self.stream)}


def _to_lattice(values):
    return np.round(values / _LATTICE) * _LATTICE


def _wiener_values(grid, seed):
    increments = seed.generator().standard_normal(grid.n) * math.sqrt(grid.dt)
    values = np.zeros(grid.n + 1)
    np.cumsum(increments, out=values[1:])

    return _to_lattice(values)


def sample_wiener(grid: Grid, seed: Seed) -> Path:
    return Path(grid, _wiener_values(grid, seed))


def sample_wiener_ensemble(grid: Grid, n_paths: int, seed: Seed, start=0):
    """Returns an (n_paths, n + 1) array whose row i is the Wiener path drawn
    with seed.child(start + i); large ensembles may thus be drawn in batches."""
    values = np.empty((n_paths, grid.n + 1))
    for idx in range(n_paths):
        values[idx] = _wiener_values(grid, seed.child(start + idx))

    return values


def check_hurst(H):
    if not (0 < H < 1):
        raise InvalidHurst("Hurst index must lie in (0, 1), not %r" % (H,))


def fbm_covariance(grid: Grid, H: float):
    """Covariance matrix of (B^H(t_1), ..., B^H(t_n))."""
    check_hurst(H)
    times = grid.times[1:]
    s, t = np.meshgrid(times, times, indexing="ij")

    return 0.5 * (s ** (2 * H) + t ** (2 * H) - np.abs(t - s) ** (2 * H))


@functools.lru_cache(maxsize=8)
def _fbm_factor(T, n, H):
    covariance = fbm_covariance(Grid(T, n), H)
    try:
        factor = scipy.linalg.cholesky(covariance, lower=True)
    except np.linalg.LinAlgError:
        smallest = float(np.linalg.eigvalsh(covariance)[0])
        raise FactorizationFailure(
            "covariance of fBm with H = %r on %i steps is not positive definite; "
            "smallest eigenvalue is %g" % (H, n, smallest),
            smallest_eigenvalue=smallest,
        )

    logging.getLogger(__name__).debug("Factorized fBm covariance for H=%g, n=%i", H, n)
    factor.setflags(write=False)

    return factor


def sample_fbm(grid: Grid, H: float, seed: Seed) -> Path:
    """Draws B^H on the grid from the exact Gaussian law, by multiplying
    standard normals with the lower Cholesky factor of the covariance."""
    check_hurst(H)
    if grid.n > MAX_FBM_STEPS:
        raise GridTooLarge(
            "fBm is limited to %i steps, not %i" % (MAX_FBM_STEPS, grid.n)
        )

    factor = _fbm_factor(grid.T, grid.n, float(H))
    values = np.zeros(grid.n + 1)
    values[1:] = factor @ seed.generator().standard_normal(grid.n)

    return Path(grid, _to_lattice(values))


DETERMINISTIC_KINDS = ("zero", "linear", "piecewise", "function")


def deterministic_path(kind, grid: Grid, slope=1.0, knots=None, func=None) -> Path:
    """Returns a non-random path evaluated exactly at the grid nodes:

      zero:      the zero path
      linear:    slope * t
      piecewise: linear interpolation between (t, value) knots in [0, T]
      function:  func(t), evaluated on the array of node times
    """
    times = grid.times
    if kind == "zero":
        values = np.zeros_like(times)
    elif kind == "linear":
        values = slope * times
    elif kind == "piecewise":
        if not knots:
            raise ValueError("piecewise paths require at least one knot")

        knots = sorted((float(t), float(value)) for (t, value) in knots)
        knot_times = [t for (t, _) in knots]
        if knot_times[0] < 0 or knot_times[-1] > grid.T:
            raise ValueError("knots must lie within [0, %g]" % (grid.T,))

        values = np.interp(times, knot_times, [value for (_, value) in knots])
    elif kind == "function":
        if func is None:
            raise ValueError("sampled-function paths require 'func'")

        values = np.broadcast_to(np.asarray(func(times), dtype=float), times.shape)
    else:
        raise ValueError(
            "unknown path kind %r; choose one of %s"
            % (kind, ", ".join(DETERMINISTIC_KINDS))
        )

    return Path(grid, values)
