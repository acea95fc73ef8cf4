import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from jacobigeo import catalog
from jacobigeo.expr import simplify
from jacobigeo.jacobi_algebroid import (JacobiData, NotJacobiError, anchor_defect,
                                        anchor_defect_predicted, basis_forms, check_anchor_identity,
                                        check_jacobiator, check_leibniz, check_poisson_identities,
                                        is_jacobi, jacobi_tensors, jacobiator, lambda_bracket,
                                        leibniz_defect, sharp_pi_xi, verify)
from jacobigeo.manifold import (Chart, GeometryError, Multivector, OneForm, VectorField,
                                random_one_form, random_polynomial)
from jacobigeo.report import CheckContext

from helpers import vanishes

seeds = st.integers(0, 2**20)


@pytest.fixture(scope="module")
def contact():
    fx = catalog.load("contact-r3")
    j, _ = verify(JacobiData(fx.chart, fx.pi, fx.xi))
    return fx, j


def test_contact_pair_is_jacobi(contact):
    fx, j = contact
    assert j.verified
    assert is_jacobi(fx.pi, fx.xi).passed


def test_mismatched_reeb_field_breaks_jacobi(contact):
    fx, _ = contact
    wrong = VectorField.basis(fx.chart, 0)
    rep = is_jacobi(fx.pi, wrong)
    assert rep.verdict == "fail" and rep.residual > 1e-3


def test_jacobi_tensors_in_dimension_two():
    ch = Chart(("x", "y"))
    P = Multivector(ch, 2, {(0, 1): 1})
    square, lie = jacobi_tensors(P, VectorField.zero(ch))
    assert square is None


def test_unverified_data_is_refused(contact):
    fx, j = contact
    raw = JacobiData(fx.chart, fx.pi, fx.xi)
    dx, dy = basis_forms(fx.chart)[:2]
    with pytest.raises(NotJacobiError):
        anchor_defect(raw, dx, dy, fx.eta)
    anchor_defect(raw, dx, dy, fx.eta, force=True)


def test_lambda_required():
    ch = Chart(("x", "y"))
    j = JacobiData.of(Multivector(ch, 2, {(0, 1): 1}))
    with pytest.raises(GeometryError):
        anchor_defect_predicted(j, *basis_forms(ch))


def test_anchor_defect_frozen_values(contact):
    fx, j = contact
    dx, dy, _ = basis_forms(fx.chart)
    # lambda = eta: sharp(eta) = xi so the defect vanishes; lambda = 0 leaves pi(dx,dy) xi = d/dz
    assert all(c.is_const(0) for c in anchor_defect(j, dx, dy, fx.eta).comps)
    d0 = anchor_defect(j, dx, dy, OneForm.zero(fx.chart))
    assert [simplify(c).is_const(v) for c, v in zip(d0.comps, (0, 0, 1))] == [True] * 3


def test_sharp_of_eta_is_reeb(contact):
    fx, j = contact
    assert vanishes(sharp_pi_xi(j, fx.eta) - fx.xi, fx.chart)


@given(seeds)
def test_anchor_theorem_random_inputs(contact, seed):
    fx, j = contact
    rng = np.random.default_rng(seed)
    a, b, lam = (random_one_form(fx.chart, rng, degree=1) for _ in range(3))
    d = anchor_defect(j, a, b, lam) - anchor_defect_predicted(j, a, b, lam)
    assert vanishes(d, fx.chart)


@given(seeds)
def test_bracket_is_antisymmetric(contact, seed):
    fx, j = contact
    rng = np.random.default_rng(seed)
    a, b, lam = (random_one_form(fx.chart, rng, degree=1) for _ in range(3))
    assert vanishes(lambda_bracket(j, a, b, lam) + lambda_bracket(j, b, a, lam), fx.chart)


@given(seeds)
def test_leibniz_rule(contact, seed):
    fx, j = contact
    rng = np.random.default_rng(seed)
    a, b = (random_one_form(fx.chart, rng, degree=1) for _ in range(2))
    phi = random_polynomial(fx.chart, rng)
    assert vanishes(leibniz_defect(j, a, b, phi, fx.eta), fx.chart)


def test_jacobiator_depends_on_lambda(contact):
    fx, j = contact
    dx, dy, dz = basis_forms(fx.chart)
    assert vanishes(jacobiator(j, dx, dy, dz, fx.eta), fx.chart)
    ctx = CheckContext(fx.chart)
    assert check_jacobiator(j, fx.eta, ctx).passed
    assert check_jacobiator(j, OneForm.zero(fx.chart), CheckContext(fx.chart)).verdict == "fail"


def test_checks_on_linear_poisson():
    fx = catalog.load("poisson-linear-r3")
    ctx = CheckContext(fx.chart)
    rep = check_poisson_identities(fx.pi, ctx)
    assert rep.passed and rep.residual < 1e-9
    assert {p.name for p in rep.parts} == {"bracket-anchor", "exact-jacobiator"}


def test_anchor_check_reports_preconditions_on_non_jacobi():
    fx = catalog.load("lcs-broken")
    j = JacobiData(fx.chart, fx.pi, fx.xi)
    rep = check_anchor_identity(j, fx.theta, CheckContext(fx.chart))
    assert rep.verdict == "preconditions-failed"


def test_leibniz_check_passes_everywhere():
    for name in ("contact-r3", "poisson-linear-r3"):
        fx = catalog.load(name)
        j = JacobiData(fx.chart, fx.pi, fx.xi)
        assert check_leibniz(j, fx.lam(), CheckContext(fx.chart)).passed
