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

import causalsde.reference

from causalsde.models import CatalogEntry, catalog_model, identity_model
from causalsde.paths import (
    Grid,
    GridMismatch,
    Path,
    Seed,
    sample_wiener,
    sample_wiener_ensemble,
)
from causalsde.reference import (
    EULER,
    MILSTEIN,
    ConvergenceRow,
    ConvergenceTable,
    NumericalBlowup,
    check_refinements,
    convergence_study,
    euler_maruyama,
    fit_slope,
    integrate_ensemble,
    milstein,
    strong_error,
)
from causalsde.solver import NoConvergence


def _sinh(a=0.0):
    return catalog_model(CatalogEntry("sinh", a=a))


###############################################################################
###############################################################################
# Reference schemes


@pytest.mark.parametrize("scheme", (euler_maruyama, milstein))
def test_scheme__identity_model_reproduces_driver(scheme):
    w = sample_wiener(Grid(1.0, 256), Seed(1))
    assert np.array_equal(scheme(identity_model(), w).values, w.values)


def test_euler_maruyama__single_step_by_hand():
    model = _sinh(a=0.5)
    w = Path(Grid(0.5, 1), [0.0, 0.25])
    x0 = math.sinh(0.5)

    expected = x0 + model.f(x0) * 0.5 + model.g(x0) * 0.25
    assert euler_maruyama(model, w).values[1] == pytest.approx(expected, rel=1e-15)


def test_milstein__correction_by_hand():
    model = _sinh()
    w = Path(Grid(0.5, 1), [0.0, 0.25])
    x0 = 0.3

    euler = x0 + model.f(x0) * 0.5 + model.g(x0) * 0.25
    correction = 0.5 * model.g(x0) * model.g_prime(x0) * (0.0625 - 0.5)
    result = milstein(model, w, x0=x0).values[1]
    assert result == pytest.approx(euler + correction, rel=1e-15)


def test_euler_maruyama__blowup():
    w = sample_wiener(Grid(1.0, 64), Seed(2))
    with pytest.raises(NumericalBlowup) as error:
        euler_maruyama(identity_model(), w, guard=1e-6)

    assert 1 <= error.value.step <= 64


@pytest.mark.parametrize("scheme", (EULER, MILSTEIN))
def test_integrate_ensemble__rows_match_single_paths(scheme):
    model = _sinh(a=0.5)
    grid = Grid(1.0, 64)
    paths = [sample_wiener(grid, Seed(3).child(i)) for i in range(4)]
    single = euler_maruyama if scheme == EULER else milstein

    drives = [path.values for path in paths]
    values = integrate_ensemble(model, drives, grid.dt, scheme=scheme)
    for row, path in enumerate(paths):
        assert values[row] == pytest.approx(single(model, path).values, rel=1e-12)


def test_integrate_ensemble__unknown_scheme():
    with pytest.raises(ValueError):
        integrate_ensemble(_sinh(), np.zeros((1, 3)), 0.5, scheme="heun")


def test_milstein__closer_to_dense_reference_than_euler():
    model = _sinh(a=0.5)
    fine, coarse = Grid(1.0, 65536), Grid(1.0, 256)
    stride = fine.n // coarse.n

    drives = sample_wiener_ensemble(fine, 40, Seed(8))
    dense = integrate_ensemble(model, drives, fine.dt)[:, ::stride]
    coarse_drives = drives[:, ::stride]
    euler = integrate_ensemble(model, coarse_drives, coarse.dt)
    corrected = integrate_ensemble(model, coarse_drives, coarse.dt, scheme=MILSTEIN)

    euler_errors = np.max(np.abs(euler - dense), axis=1)
    milstein_errors = np.max(np.abs(corrected - dense), axis=1)
    assert np.mean(milstein_errors < euler_errors) >= 0.9


def test_strong_error():
    grid = Grid(1.0, 2)
    first = Path(grid, [0.0, 1.0, 2.0])
    second = Path(grid, [0.0, 1.5, 1.0])
    assert strong_error(first, second) == 1.0


def test_strong_error__grid_mismatch():
    with pytest.raises(GridMismatch):
        strong_error(Path(Grid(1.0, 1), [0, 0]), Path(Grid(1.0, 2), [0, 0, 0]))


###############################################################################
###############################################################################
# Slopes and refinements


def test_fit_slope__exact_power_law():
    steps = [0.1, 0.01, 0.001]
    errors = [2 * step ** 0.5 for step in steps]
    assert fit_slope(steps, errors) == pytest.approx(0.5)


@pytest.mark.parametrize("errors", ([0.1, 0.0], [0.1, math.nan]))
def test_fit_slope__undefined(errors):
    assert fit_slope([0.1, 0.01], errors) is None


def test_fit_slope__single_grid():
    with pytest.raises(ValueError):
        fit_slope([0.1], [0.2])


def test_check_refinements():
    assert check_refinements(["16", 64, 256]) == [16, 64, 256]


@pytest.mark.parametrize("n_list", ([], [64, 16], [16, 16]))
def test_check_refinements__invalid(n_list):
    with pytest.raises(ValueError):
        check_refinements(n_list)


def test_check_refinements__not_a_divisor():
    with pytest.raises(GridMismatch):
        check_refinements([48, 64])


###############################################################################
###############################################################################
# Convergence studies


def test_convergence_study__identity_model_is_exact():
    table = convergence_study(identity_model(), [16, 64, 256], 4, Seed(4))

    assert table.mean_errors() == [0.0, 0.0, 0.0]
    assert table.slope is None
    assert table.failures == 0


def test_convergence_study__sinh_against_euler():
    n_list = [64, 128, 256, 512, 1024]
    table = convergence_study(_sinh(), n_list, 40, Seed(5))

    assert table.failures == 0
    assert table.strictly_decreasing()
    assert table.slope >= 0.4
    assert [row.paths for row in table.rows] == [40] * len(n_list)


def test_convergence_study__failed_path_is_dropped_from_every_row(monkeypatch):
    solve = causalsde.reference.solve_fixed_point
    calls = []

    def _fail_first_call(model, w, config=None):
        calls.append(w.grid.n)
        if len(calls) == 1:
            raise NoConvergence("no convergence", None, None)

        return solve(model, w, config)

    monkeypatch.setattr(causalsde.reference, "solve_fixed_point", _fail_first_call)
    table = convergence_study(_sinh(), [16, 64], 6, Seed(1))

    assert calls[0] == 16
    assert [row.paths for row in table.rows] == [5, 5]
    assert [row.failures for row in table.rows] == [1, 1]
    assert table.failures == 1


def test_convergence_study__threads_match_serial():
    serial = convergence_study(_sinh(), [16, 64], 6, Seed(6))
    threaded = convergence_study(_sinh(), [16, 64], 6, Seed(6), workers=3)
    assert serial.to_dict() == threaded.to_dict()


def test_convergence_study__single_grid():
    with pytest.raises(ValueError):
        convergence_study(_sinh(), [64], 2, Seed(7))


def test_convergence_study__unknown_reference():
    with pytest.raises(ValueError):
        convergence_study(_sinh(), [16, 64], 2, Seed(7), reference="heun")


def test_convergence_table__sorted_rows():
    rows = [ConvergenceRow(64, 1 / 64, 0.1, 0.2, 3)]
    rows.append(ConvergenceRow(16, 1 / 16, 0.3, 0.4, 3))
    table = ConvergenceTable(rows=rows, slope=None)
    assert [row.n for row in table.rows] == [16, 64]
    assert table.strictly_decreasing()


def test_convergence_table__csv_footer(tmp_path):
    rows = [ConvergenceRow(16, 0.0625, 0.25, 0.5, 2, failures=1)]
    rows.append(ConvergenceRow(64, 0.015625, 0.125, 0.25, 3))
    filename = tmp_path / "convergence.csv"

    ConvergenceTable(rows=rows, slope=0.5).write_csv(filename)

    lines = filename.read_text().splitlines()
    assert lines[0] == "n,dt,mean_err,max_err,paths,failures"
    assert lines[1] == "16,0.0625,0.25,0.5,2,1"
    assert lines[-1] == "slope,0.5,,,,"


def test_convergence_table__csv_footer_without_slope(tmp_path):
    rows = [ConvergenceRow(16, 0.0625, 0.0, 0.0, 2)]
    filename = tmp_path / "convergence.csv"

    ConvergenceTable(rows=rows, slope=None).write_csv(filename)

    assert filename.read_text().splitlines()[-1] == "slope,NA,,,,"
