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
import math

import numpy as np
import pytest

from causalsde.paths import (
    MAX_FBM_STEPS,
    FactorizationFailure,
    Grid,
    GridMismatch,
    GridTooLarge,
    InvalidHurst,
    Path,
    PathError,
    Seed,
    check_same_grid,
    deterministic_path,
    fbm_covariance,
    sample_fbm,
    sample_wiener,
    sample_wiener_ensemble,
)

import causalsde.paths


###############################################################################
###############################################################################
# Grid


def test_grid__nodes():
    grid = Grid(2.0, 4)
    assert grid.dt == 0.5
    assert list(grid.times) == [0.0, 0.5, 1.0, 1.5, 2.0]


def test_grid__last_node_is_horizon():
    grid = Grid(0.7, 3)
    assert grid.times[0] == 0.0
    assert grid.times[-1] == 0.7


_INVALID_GRIDS = ((0.0, 4), (-1.0, 4), (math.inf, 4), (1.0, 0), (1.0, 1.5))


@pytest.mark.parametrize("T, n", _INVALID_GRIDS)
def test_grid__invalid(T, n):
    with pytest.raises(ValueError):
        Grid(T, n)


def test_grid__restrict():
    assert Grid(1.0, 8).restrict(2) == Grid(1.0, 2)


def test_grid__restrict__not_a_divisor():
    with pytest.raises(GridMismatch):
        Grid(1.0, 8).restrict(3)


def test_grid__index_of():
    grid = Grid(1.0, 4)
    assert grid.index_of(0.75) == 3
    assert grid.index_of(1.0) == 4


def test_grid__index_of__not_a_node():
    with pytest.raises(ValueError):
        Grid(1.0, 4).index_of(0.3)


def test_grid__to_dict():
    assert Grid(1.0, 4).to_dict() == {"T": 1.0, "n": 4}


###############################################################################
###############################################################################
# Path


def test_path__values_are_read_only():
    path = Path(Grid(1.0, 2), [0.0, 1.0, 2.0])
    with pytest.raises(ValueError):
        path.values[0] = 1.0


def test_path__wrong_length():
    with pytest.raises(GridMismatch):
        Path(Grid(1.0, 2), [0.0, 1.0])


def test_path__non_finite():
    with pytest.raises(PathError):
        Path(Grid(1.0, 2), [0.0, math.nan, 1.0])


def test_path__restrict():
    path = Path(Grid(1.0, 4), [0.0, 1.0, 2.0, 3.0, 4.0])
    coarse = path.restrict(2)
    assert coarse.grid == Grid(1.0, 2)
    assert list(coarse.values) == [0.0, 2.0, 4.0]


def test_path__csv(tmp_path):
    path = sample_wiener(Grid(1.0, 16), Seed(1))
    filename = tmp_path / "path.csv"
    path.write_csv(filename)

    result = Path.read_csv(filename)
    assert result.grid == path.grid
    assert np.array_equal(result.values, path.values)


def test_path__read_csv__named_column(tmp_path):
    filename = tmp_path / "path.csv"
    filename.write_text("t,X\n0,1.5\n0.5,2\n1,2.5\n")

    path = Path.read_csv(filename, column="X")
    assert path.grid == Grid(1.0, 2)
    assert list(path.values) == [1.5, 2.0, 2.5]


def test_path__read_csv__missing_column(tmp_path):
    filename = tmp_path / "path.csv"
    filename.write_text("t,X\n0,1.5\n1,2.5\n")

    with pytest.raises(PathError, match="column 'value'"):
        Path.read_csv(filename)


def test_path__read_csv__uneven_times(tmp_path):
    filename = tmp_path / "path.csv"
    filename.write_text("t,value\n0,0\n0.2,1\n1,2\n")

    with pytest.raises(PathError, match="uniformly spaced"):
        Path.read_csv(filename)


def test_check_same_grid():
    first = Path(Grid(1.0, 2), [0.0, 0.0, 0.0])
    second = Path(Grid(2.0, 2), [0.0, 0.0, 0.0])
    assert check_same_grid(first, first) == first.grid
    with pytest.raises(GridMismatch):
        check_same_grid(first, second)


###############################################################################
###############################################################################
# Seeds


def test_seed__determinism():
    grid = Grid(1.0, 64)
    first = sample_wiener(grid, Seed(7))
    second = sample_wiener(grid, Seed(7))
    assert np.array_equal(first.values, second.values)


def test_seed__streams_differ():
    grid = Grid(1.0, 64)
    first = sample_wiener(grid, Seed(7).child(0))
    second = sample_wiener(grid, Seed(7).child(1))
    assert not np.array_equal(first.values, second.values)


def test_seed__named_is_stable():
    assert Seed(3).named("causal") == Seed(3).named("causal")
    assert Seed(3).named("causal") != Seed(3).named("translated")


@pytest.mark.parametrize("value", (-1, 2 ** 64))
def test_seed__out_of_range(value):
    with pytest.raises(ValueError):
        Seed(value)


def test_seed__from_entropy():
    assert 0 <= Seed.from_entropy().value < 2 ** 64


def test_seed__to_dict():
    assert Seed(5).child(2).to_dict() == {"value": 5, "stream": [2]}


###############################################################################
###############################################################################
# Wiener paths


def test_sample_wiener__starts_at_zero():
    assert sample_wiener(Grid(1.0, 32), Seed(11)).values[0] == 0.0


def test_sample_wiener__increments_sum_exactly():
    path = sample_wiener(Grid(1.0, 256), Seed(11))
    assert np.array_equal(np.cumsum(path.increments()), path.values[1:])


def test_sample_wiener_ensemble__rows_match_children():
    grid = Grid(1.0, 16)
    ensemble = sample_wiener_ensemble(grid, 5, Seed(2), start=3)
    for row in range(5):
        expected = sample_wiener(grid, Seed(2).child(3 + row))
        assert np.array_equal(ensemble[row], expected.values)


def test_sample_wiener_ensemble__moments():
    n_paths = 20000
    ensemble = sample_wiener_ensemble(Grid(1.0, 16), n_paths, Seed(12345))
    final = ensemble[:, -1]
    half = ensemble[:, 8]

    assert abs(np.mean(final)) <= 4 / math.sqrt(n_paths)
    assert np.var(final) == pytest.approx(1.0, rel=0.05)
    # Var(w(0.5) w(1)) = 0.5 * 1 + 0.5^2
    tolerance = 4 * math.sqrt(0.75 / n_paths)
    assert np.mean(half * final) == pytest.approx(0.5, abs=tolerance)


def test_sample_wiener_ensemble__increment_kurtosis():
    n_paths = 20000
    increments = np.diff(sample_wiener_ensemble(Grid(1.0, 4), n_paths, Seed(9)), axis=1)
    standardized = increments / math.sqrt(0.25)
    kurtosis = np.mean(standardized ** 4)
    # Standard error of the fourth moment of a standard normal is sqrt(96 / N)
    assert kurtosis == pytest.approx(3.0, abs=4 * math.sqrt(96 / increments.size))


###############################################################################
###############################################################################
# Fractional Brownian motion


def _fbm_ensemble(grid, H, seed, n_paths):
    return np.array([sample_fbm(grid, H, seed.child(i)).values for i in range(n_paths)])


@pytest.mark.parametrize("H", (0.0, 1.0, -0.5, 1.5))
def test_sample_fbm__invalid_hurst(H):
    with pytest.raises(InvalidHurst):
        sample_fbm(Grid(1.0, 4), H, Seed(1))


def test_sample_fbm__grid_too_large():
    with pytest.raises(GridTooLarge):
        sample_fbm(Grid(1.0, MAX_FBM_STEPS + 1), 0.7, Seed(1))


def test_fbm_covariance__half_is_wiener():
    grid = Grid(1.0, 4)
    s, t = np.meshgrid(grid.times[1:], grid.times[1:], indexing="ij")
    assert fbm_covariance(grid, 0.5) == pytest.approx(np.minimum(s, t))


def test_sample_fbm__determinism():
    grid = Grid(1.0, 32)
    first = sample_fbm(grid, 0.3, Seed(4))
    second = sample_fbm(grid, 0.3, Seed(4))
    assert first.values[0] == 0.0
    assert np.array_equal(first.values, second.values)


@pytest.mark.parametrize("H", (0.5, 0.75))
def test_sample_fbm__moments(H):
    n_paths = 4000
    grid = Grid(1.0, 8)
    paths = _fbm_ensemble(grid, H, Seed(21), n_paths)
    final = paths[:, -1]
    half = paths[:, 4]

    expected = 0.5 * (0.5 ** (2 * H) + 1 - 0.5 ** (2 * H))
    tolerance = 5 * math.sqrt(2 / n_paths)
    assert np.var(final) == pytest.approx(1.0, abs=tolerance)
    assert np.mean(half * final) == pytest.approx(expected, abs=tolerance)


def test_sample_fbm__half_has_uncorrelated_increments():
    n_paths = 4000
    grid = Grid(1.0, 4)
    paths = _fbm_ensemble(grid, 0.5, Seed(8), n_paths)
    covariance = np.cov(np.diff(paths, axis=1), rowvar=False)

    off_diagonal = covariance[~np.eye(4, dtype=bool)]
    assert np.max(np.abs(off_diagonal)) <= 5 * 0.25 / math.sqrt(n_paths)


def test_fbm_factor__failure_reports_eigenvalue(monkeypatch):
    def _singular(grid, H):
        return np.array([[1.0, 2.0], [2.0, 1.0]])

    monkeypatch.setattr(causalsde.paths, "fbm_covariance", _singular)
    causalsde.paths._fbm_factor.cache_clear()
    try:
        with pytest.raises(FactorizationFailure) as error:
            sample_fbm(Grid(1.0, 2), 0.6, Seed(1))
    finally:
        causalsde.paths._fbm_factor.cache_clear()

    assert error.value.smallest_eigenvalue == pytest.approx(-1.0)


###############################################################################
###############################################################################
# Deterministic paths


def test_deterministic_path__zero():
    assert not np.any(deterministic_path("zero", Grid(1.0, 8)).values)


def test_deterministic_path__linear():
    grid = Grid(1.0, 4)
    assert np.array_equal(deterministic_path("linear", grid).values, grid.times)


def test_deterministic_path__piecewise():
    knots = [(0, 0), (0.5, 1), (1, 0)]
    path = deterministic_path("piecewise", Grid(1.0, 4), knots=knots)
    assert list(path.values) == [0.0, 0.5, 1.0, 0.5, 0.0]


def test_deterministic_path__piecewise_outside_horizon():
    with pytest.raises(ValueError):
        deterministic_path("piecewise", Grid(1.0, 4), knots=[(0, 0), (2, 1)])


def test_deterministic_path__function():
    path = deterministic_path("function", Grid(1.0, 2), func=np.square)
    assert list(path.values) == [0.0, 0.25, 1.0]


def test_deterministic_path__unknown_kind():
    with pytest.raises(ValueError, match="unknown path kind"):
        deterministic_path("brownian", Grid(1.0, 2))
