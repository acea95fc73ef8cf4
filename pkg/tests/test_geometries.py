import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from jacobigeo import catalog
from jacobigeo.calculus import exterior_d, lie_derivative
from jacobigeo.expr import evaluate, simplify
from jacobigeo.geometries import (AlmostContactMetric, DegenerateFormError, NotContactError,
                                  almost_contact_pi, check_contact_algebroid,
                                  check_half_kenmotsu_equivalence, check_lcs,
                                  check_lcs_jacobi_equivalence, conformal_checks, contact_from,
                                  kenmotsu_check, kenmotsu_defect, lck_check, lemma_identities,
                                  standard_phi, validate_almost_contact, volume_coefficient)
from jacobigeo.jacobi_algebroid import JacobiData, basis_forms, sharp_pi_xi
from jacobigeo.manifold import (Chart, Form, OneForm, VectorField, interior,
                                random_vector_field)
from jacobigeo.report import CheckContext

from helpers import vanishes

seeds = st.integers(0, 2**20)


def comps_equal(a, b):
    return all(simplify(x - y).is_const(0) for x, y in zip(a, b))


# -- contact ----------------------------------------------------------------------------

def test_contact_r3_derived_objects():
    ch = Chart(("x", "y", "z"))
    c = contact_from(OneForm(ch, [ch.parse("-y"), 0, 1]))
    assert comps_equal(c.xi.comps, [0, 0, 1])
    assert c.pi[0, 1].is_const(1)
    assert c.pi[0, 2].is_const(0)
    assert simplify(c.pi[1, 2] + ch.parse("y")).is_const(0)
    assert simplify(volume_coefficient(c.eta)).is_const(1)


def test_contact_r5_reeb_and_bivector():
    fx = catalog.load("contact-r5")
    ch = fx.chart
    assert comps_equal(fx.xi.comps, [0, 0, 0, 0, 1])
    # pi = sum_k (d/dx_k + y_k d/dz) ^ d/dy_k
    assert fx.pi[0, 1].is_const(1) and fx.pi[2, 3].is_const(1)
    assert simplify(fx.pi[1, 4] + ch.parse("y1")).is_const(0)
    assert fx.pi[0, 2].is_const(0)


@pytest.mark.parametrize("name", ["contact-r3", "contact-r5"])
def test_contact_anchor_equals_flat_inverse(name):
    fx = catalog.load(name)
    j = JacobiData(fx.chart, fx.pi, fx.xi)
    for a in basis_forms(fx.chart):
        assert vanishes(sharp_pi_xi(j, a) - fx.contact.sharp_eta(a), fx.chart)
    rep = check_contact_algebroid(fx.eta, CheckContext(fx.chart))
    assert rep.passed and rep.residual < 1e-9


def test_non_contact_forms_are_rejected():
    ch = Chart(("x", "y", "z"))
    with pytest.raises(NotContactError):
        contact_from(OneForm(ch, [0, 0, 1]))
    with pytest.raises(NotContactError):
        contact_from(OneForm(Chart(("x", "y")), [1, 0]))
    rep = check_contact_algebroid(OneForm(ch, [0, 0, 1]))
    assert rep.verdict == "preconditions-failed"


@pytest.mark.parametrize("name", ["contact-r3", "contact-r5"])
def test_fixture_phi_is_standard(name):
    fx = catalog.load(name)
    std = standard_phi(fx.chart, fx.eta)
    assert all(comps_equal(r, s) for r, s in zip(fx.phi.comps, std.comps))


def test_almost_contact_validation_rejects_bad_phi():
    fx = catalog.load("contact-r3")
    bad = AlmostContactMetric(fx.phi * 2, fx.xi, fx.eta, fx.g)
    assert not validate_almost_contact(bad, CheckContext(fx.chart)).passed


def test_kenmotsu_bivector_kills_dt():
    fx = catalog.load("kenmotsu-half")
    j = almost_contact_pi(fx.acm)
    dt, dx, dy = basis_forms(fx.chart)
    assert j.pi(dt, dx).is_const(0) and j.pi(dt, dy).is_const(0)
    assert not j.verified


@pytest.mark.parametrize("name, good, bad", [("kenmotsu-half", "1/2", 1),
                                             ("kenmotsu-one", 1, "1/2")])
def test_kenmotsu_defect_selects_constant(name, good, bad):
    from fractions import Fraction
    fx = catalog.load(name)
    ctx = CheckContext(fx.chart)
    assert kenmotsu_check(fx.acm, Fraction(good), ctx).passed
    assert kenmotsu_check(fx.acm, Fraction(bad), ctx).verdict == "fail"


@given(seeds)
def test_half_kenmotsu_defect_vanishes_on_warped_half(seed):
    from fractions import Fraction
    fx = catalog.load("kenmotsu-half")
    rng = np.random.default_rng(seed)
    X, Y = (random_vector_field(fx.chart, rng, degree=1) for _ in range(2))
    assert vanishes(kenmotsu_defect(fx.acm, Fraction(1, 2), X, Y, fx.package()), fx.chart)


def test_half_kenmotsu_equivalence_needs_jacobi():
    fx = catalog.load("kenmotsu-one")
    ctx = CheckContext(fx.chart)
    assert check_half_kenmotsu_equivalence(fx.acm, ctx).verdict == "preconditions-failed"
    forced = check_half_kenmotsu_equivalence(fx.acm, ctx, force=True)
    assert forced.verdict != "theorem-violated"


@pytest.mark.parametrize("name", ["contact-r3", "contact-r5"])
def test_half_kenmotsu_equivalence_on_contact(name):
    fx = catalog.load(name)
    assert check_half_kenmotsu_equivalence(fx.acm, CheckContext(fx.chart)).passed


# -- locally conformally symplectic -------------------------------------------------------

@pytest.fixture(scope="module")
def lcs():
    return catalog.load("lcs-gcs-r4")


def test_lcs_lee_vector_field(lcs):
    l = lcs.lcs
    # xi = sharp_w(theta) = e^x d/dy
    assert comps_equal(l.xi.comps, [0, lcs.chart.parse("exp(x)"), 0, 0])
    assert comps_equal(interior(l.xi, l.omega).comps, (-lcs.theta).comps)
    assert simplify(lcs.theta(l.xi)).is_const(0)


def test_lcs_lie_derivative_of_omega(lcs):
    l = lcs.lcs
    assert vanishes(lie_derivative(l.xi, l.omega) + exterior_d(l.theta), lcs.chart)


def test_lcs_anchor_of_theta(lcs):
    j = JacobiData(lcs.chart, lcs.pi, lcs.xi)
    assert vanishes(sharp_pi_xi(j, lcs.theta) - lcs.xi, lcs.chart)


@pytest.mark.parametrize("name", ["lcs-gcs-r4", "lcs-broken"])
def test_lemma_identities_hold_unconditionally(name):
    fx = catalog.load(name)
    first, second = lemma_identities(fx.lcs)
    assert vanishes(first + second, fx.chart)


def test_broken_variant_pattern():
    fx = catalog.load("lcs-broken")
    ctx = CheckContext(fx.chart)
    assert check_lcs(fx.lcs, ctx).verdict == "fail"
    rep = check_lcs_jacobi_equivalence(fx.lcs, ctx)
    assert rep.verdict == "fail"


def test_degenerate_omega():
    ch = Chart(("x", "y", "z", "w"))
    from jacobigeo.geometries import lcs_from
    with pytest.raises(DegenerateFormError):
        lcs_from(Form(ch, 2, {(0, 1): 1}), OneForm.zero(ch))


def test_conformal_checks_pass(lcs):
    reps = conformal_checks(lcs.lcs, lcs.package(), CheckContext(lcs.chart))
    assert [r.name for r in reps] == ["lambda-f", "conformal-parallel", "conformal-identity",
                                      "conformal-connection"]
    assert all(r.passed for r in reps)


def test_lck_on_catalog_metric(lcs):
    ctx = CheckContext(lcs.chart)
    rep = lck_check(lcs.lcs, lcs.g, ctx)
    # the anchor of e^(-x) * Euclidean is not an isometry, so the hypotheses do not apply
    assert rep.verdict == "preconditions-failed"
    assert "isometry" in rep.note
    forced = lck_check(lcs.lcs, lcs.g, ctx, force=True)
    assert forced.verdict == "fail" and forced.note


def test_lcs_isometry_defect_frozen(lcs):
    # g*(sharp dy, sharp dy) = e^x + e^(3x) while g*(dy, dy) = e^x
    from jacobigeo.metric_connection import cometric
    pkg = lcs.package()
    j = pkg.j
    dy = basis_forms(lcs.chart)[1]
    s = sharp_pi_xi(j, dy)
    p = (0.3, 0.1, -0.2, 0.5)
    assert evaluate(pkg.g(s, s), p) == pytest.approx(np.exp(0.3) + np.exp(0.9))
    assert evaluate(cometric(pkg, dy, dy), p) == pytest.approx(np.exp(0.3))


@pytest.mark.parametrize("name, holds", [("contact-r3", True), ("poisson-flat-r2", True),
                                         ("lcs-gcs-r4", False)])
def test_anchor_intertwines_J_and_J_star(name, holds):
    fx = catalog.load(name)
    pkg = fx.package()
    res = [pkg.J(sharp_pi_xi(pkg.j, a)) - sharp_pi_xi(pkg.j, pkg.J_star(a))
           for a in basis_forms(fx.chart)]
    assert vanishes(res, fx.chart) is holds
