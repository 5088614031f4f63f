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

from causalsde.models import (
    CATALOG_NAMES,
    CLOSED_FORM,
    PHI_NAMES,
    TABULATED,
    CatalogEntry,
    DivisionByZeroDiffusion,
    DomainEscape,
    InvalidAlpha,
    ModelError,
    NonmonotoneC,
    OdeBlowup,
    OdeConfig,
    TabulatedTransform,
    UnboundedKernel,
    build_model_from_fg,
    catalog_model,
    contraction_weight,
    identity_model,
    kappa_composed,
    kappa_from_fg,
    make_phi,
    tabulated_catalog_model,
    verify_model,
)


_TEST_GRID = np.linspace(-3.0, 3.0, 601)

_CATALOG_ENTRIES = [CatalogEntry("sinh", a=a) for a in (0.0, 1.0)] + [
    CatalogEntry("power", a=a, alpha=alpha) for a in (0.0, 1.0) for alpha in (0.5, -0.5)
]


###############################################################################
###############################################################################
# Bounded kernels


_PHI_BOUNDS = (
    ("zero", 0.0),
    ("arctan", math.pi / 2),
    ("tanh", 1.0),
    ("sin", 1.0),
    ("constant", 1.0),
)


@pytest.mark.parametrize("name, bound", _PHI_BOUNDS)
def test_make_phi__bounds(name, bound):
    phi, observed = make_phi(name)
    assert observed == bound
    assert np.max(np.abs(phi(np.linspace(-50, 50, 1001)))) <= bound


def test_make_phi__scaled():
    phi, bound = make_phi("tanh", -2.0)
    assert bound == 2.0
    assert phi(1.0) == pytest.approx(-2.0 * math.tanh(1.0))


def test_make_phi__unknown_name():
    with pytest.raises(ModelError, match="unknown kernel"):
        make_phi("exp")


def test_make_phi__infinite_scale():
    with pytest.raises(UnboundedKernel):
        make_phi("sin", math.inf)


def test_phi_names():
    assert PHI_NAMES == ("arctan", "constant", "sin", "tanh", "zero")


###############################################################################
###############################################################################
# Catalog entries


def test_catalog_names():
    assert CATALOG_NAMES == ("power", "sinh", "unit")


def test_catalog_model__unknown_entry():
    with pytest.raises(ModelError, match="unknown catalog entry"):
        catalog_model(CatalogEntry("cosh"))


def test_catalog_model__sinh_closed_form():
    model = catalog_model(CatalogEntry("sinh", a=0.5))
    assert model.mode == CLOSED_FORM
    assert model.c(0.25) == pytest.approx(math.sinh(0.75))
    assert model.c_inverse(math.sinh(0.75)) == pytest.approx(0.25)
    assert model.x0 == pytest.approx(math.sinh(0.5))
    assert model.kappa(1.0) == pytest.approx(math.atan(1.0))


def test_catalog_model__sinh_inverse_handles_shift():
    model = catalog_model(CatalogEntry("sinh", a=1.0))
    y = np.linspace(-5, 5, 11)
    assert model.c(model.c_inverse(y)) == pytest.approx(y)


@pytest.mark.parametrize("alpha", (1.0, -1.0, 1.5))
def test_catalog_model__power_rejects_alpha(alpha):
    with pytest.raises(InvalidAlpha):
        catalog_model(CatalogEntry("power", alpha=alpha))


def test_catalog_model__power_alpha_zero_is_translation():
    model = catalog_model(CatalogEntry("power", a=0.5, alpha=0.0))
    assert model.c(1.0) == 1.5
    assert model.singular_arguments == ()


def test_catalog_model__power_singular_point():
    model = catalog_model(CatalogEntry("power", a=1.0, alpha=0.5))
    assert model.singular_arguments == (-1.0,)
    assert model.singular_states == (0.0,)
    assert model.c(-1.0) == 0.0


def test_catalog_model__unit():
    model = catalog_model(CatalogEntry("unit", a=1.0, sigma=2.0, phi="constant"))
    assert model.c(0.5) == 3.0
    assert model.c_inverse(3.0) == 0.5
    assert model.f(7.0) == -2.0
    assert kappa_composed(model, np.zeros(3)) == pytest.approx([1.0, 1.0, 1.0])


def test_catalog_model__unit_rejects_sigma():
    with pytest.raises(ModelError, match="sigma"):
        catalog_model(CatalogEntry("unit", sigma=0.0))


def test_identity_model():
    model = identity_model()
    u = np.linspace(-2, 2, 9)
    assert np.array_equal(model.c(u), u)
    assert np.array_equal(model.kappa(u), np.zeros_like(u))
    assert model.kappa_bound == 0.0
    assert model.x0 == 0.0


def test_catalog_entry__parameters():
    assert CatalogEntry("power", alpha=0.25).parameters() == {
        "entry": "power",
        "a": 0.0,
        "phi": "arctan",
        "phi_scale": 1.0,
        "alpha": 0.25,
    }


def test_model_spec__c_range():
    assert identity_model().c_range == (-math.inf, math.inf)


def test_model_spec__with_kappa():
    model = catalog_model(CatalogEntry("sinh"))
    modified = model.with_kappa(np.tanh, 1.0)
    assert modified.kappa_bound == 1.0
    assert modified.name == "sinh+modified-kappa"
    assert modified.c is model.c


def test_model_spec__describe():
    description = catalog_model(CatalogEntry("sinh")).describe()
    assert description["name"] == "sinh"
    assert description["mode"] == CLOSED_FORM
    assert description["kappa_bound"] == pytest.approx(math.pi / 2)


###############################################################################
###############################################################################
# Verification of catalog entries


@pytest.mark.parametrize("entry", _CATALOG_ENTRIES)
def test_verify_model__catalog_entries(entry):
    report = verify_model(catalog_model(entry), _TEST_GRID)
    assert report.passed, report.failed_checks()


def test_verify_model__kappa_equals_phi():
    model = catalog_model(CatalogEntry("sinh"))
    x = model.c(_TEST_GRID)
    expected = model.g_prime(x) / 2 - model.f(x) / model.g(x)
    assert np.max(np.abs(model.kappa(x) - expected)) <= 1e-12


def test_verify_model__detects_inconsistent_kernel():
    model = catalog_model(CatalogEntry("sinh")).with_kappa(np.tanh, 1.0)
    report = verify_model(model, _TEST_GRID)
    assert not report.passed
    assert report.failed_checks() == ["kappa"]


def test_verify_model__identity_analytic_checks_are_exact():
    report = verify_model(identity_model(), _TEST_GRID)
    assert report.passed
    assert report.checks["transform"]["value"] == 0.0
    assert report.checks["kappa"]["value"] == 0.0
    assert report.checks["inverse"]["value"] == 0.0


###############################################################################
###############################################################################
# Models built from (f, g)


def test_kappa_from_fg():
    value = kappa_from_fg(lambda x: x, lambda x: 2.0 + 0 * x, lambda x: 0 * x, 4.0)
    assert value == pytest.approx(-2.0)


def test_kappa_from_fg__zero_diffusion():
    with pytest.raises(DivisionByZeroDiffusion):
        kappa_from_fg(np.abs, np.abs, np.sign, np.array([1.0, 0.0]))


def test_build_model_from_fg__unit_diffusion():
    model = build_model_from_fg(
        lambda x: 0 * x,
        lambda x: 1.0 + 0 * x,
        lambda x: 0 * x,
        0.0,
        ode_config=OdeConfig(step=1e-2, half_width=2.0),
        kappa_bound=0.0,
    )

    assert model.mode == TABULATED
    assert model.argument_range == pytest.approx((-2.0, 2.0))
    assert model.c(0.5) == pytest.approx(0.5, abs=1e-14)
    assert model.c_inverse(0.25) == pytest.approx(0.25, abs=1e-14)


@pytest.mark.parametrize("a", (0.0, 1.0))
def test_tabulated_catalog_model__sinh_matches_closed_form(a):
    entry = CatalogEntry("sinh", a=a)
    closed = catalog_model(entry)
    tabulated = tabulated_catalog_model(entry, OdeConfig(step=1e-3, half_width=4.0))

    u = np.linspace(-3, 3, 601)
    assert np.max(np.abs(tabulated.c(u) - closed.c(u))) <= 1e-8
    assert np.max(np.abs(tabulated.c_prime(u) - closed.c_prime(u))) <= 1e-6
    assert verify_model(tabulated, u).passed


def test_tabulated_catalog_model__inverse():
    tabulated = tabulated_catalog_model(
        CatalogEntry("sinh"), OdeConfig(step=1e-3, half_width=4.0)
    )
    u = np.linspace(-3, 3, 61)
    assert tabulated.c_inverse(tabulated.c(u)) == pytest.approx(u, abs=1e-10)


def test_tabulated_transform__domain_escape():
    tabulated = tabulated_catalog_model(
        CatalogEntry("sinh"), OdeConfig(step=1e-2, half_width=2.0)
    )
    with pytest.raises(DomainEscape):
        tabulated.c(2.5)
    with pytest.raises(DomainEscape):
        tabulated.c_inverse(100.0)


def test_build_model_from_fg__nonpositive_g():
    # A coarse step overshoots the zero of g at x = 1
    with pytest.raises(NonmonotoneC):
        build_model_from_fg(
            lambda x: 0 * x,
            lambda x: 1.0 - x,
            lambda x: 0 * x - 1.0,
            0.0,
            ode_config=OdeConfig(step=3.0, half_width=6.0),
            kappa=np.arctan,
            kappa_bound=math.pi / 2,
        )


def test_build_model_from_fg__blowup():
    with pytest.raises(OdeBlowup) as error:
        build_model_from_fg(
            lambda x: 0 * x,
            lambda x: 1 + np.square(x),
            lambda x: 2 * x,
            0.0,
            ode_config=OdeConfig(step=1e-3, half_width=3.0),
            kappa=np.tanh,
            kappa_bound=1.0,
        )

    low, high = error.value.reached
    assert low == 0.0
    assert high == pytest.approx(math.pi / 2, abs=1e-2)


def test_build_model_from_fg__x0_outside_domain():
    with pytest.raises(ModelError, match="outside the domain"):
        build_model_from_fg(
            np.sin, np.cos, np.sin, 5.0, domain=(-1.0, 1.0), kappa_bound=1.0
        )


def test_build_model_from_fg__unbounded_kernel():
    with pytest.raises(UnboundedKernel):
        build_model_from_fg(
            lambda x: -x,
            lambda x: 1.0 + 0 * x,
            lambda x: 0 * x,
            0.0,
            ode_config=OdeConfig(step=1e-2, half_width=2.0),
            kappa_bound=1.0,
        )


def test_tabulated_transform__monotone_between_nodes():
    nodes = np.array([0.0, 1.0, 2.0, 3.0])
    values = np.array([0.0, 0.1, 0.2, 10.0])
    transform = TabulatedTransform(nodes, values, np.array([0.1, 5.0, 5.0, 10.0]))
    dense = transform(np.linspace(0, 3, 3001))
    assert np.all(np.diff(dense) >= 0)


###############################################################################
###############################################################################
# Contraction weight


def test_contraction_weight__zero_kernel():
    assert contraction_weight(identity_model(), np.zeros(5), 1.0) == 0.0


def test_contraction_weight__unit_model():
    model = catalog_model(CatalogEntry("unit", sigma=2.0, phi="tanh"))
    assert contraction_weight(model, np.zeros(5), 1.0) == pytest.approx(4.0)


def test_contraction_weight__capped():
    model = catalog_model(CatalogEntry("sinh", phi="constant", phi_scale=50.0))
    assert contraction_weight(model, np.zeros(5), 2.0) == 350.0
