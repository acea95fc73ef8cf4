import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from jacobigeo.calculus import (differential, exterior_d, koszul, lie_bracket, lie_derivative,
                                lie_derivative_bivector_direct, lie_derivative_direct, schouten,
                                sharp_pi)
from jacobigeo.expr import simplify
from jacobigeo.manifold import (Chart, Form, Multivector, OneForm, VectorField, random_bivector,
                                random_one_form, random_polynomial, random_vector_field, wedge)

from helpers import vanishes

C3 = Chart(("x", "y", "z"))
C4 = Chart(("x", "y", "z", "w"))
seeds = st.integers(0, 2**20)


def rng(seed):
    return np.random.default_rng(seed)


def test_exterior_d_frozen_components():
    # d(x^2 y dz) = 2xy dx^dz + x^2 dy^dz
    w = OneForm(C3, [0, 0, C3.parse("x^2*y")])
    dw = exterior_d(w)
    assert simplify(dw[0, 2] - C3.parse("2*x*y")).is_const(0)
    assert simplify(dw[1, 2] - C3.parse("x^2")).is_const(0)
    assert dw[0, 1].is_const(0)


def test_catalog_lcs_closure_identity():
    om = Form(C4, 2, {(0, 1): C4.parse("exp(-x)"), (2, 3): C4.parse("exp(-x)")})
    theta = OneForm(C4, [1, 0, 0, 0])
    assert vanishes(exterior_d(om) + wedge(theta, om), C4)


@given(seeds)
def test_d_squared_vanishes_on_functions(seed):
    f = random_polynomial(C3, rng(seed), degree=3)
    assert all(c.is_const(0) for c in exterior_d(exterior_d(differential(f, C3))).comps.values())


@given(seeds)
def test_d_squared_vanishes_on_one_forms(seed):
    a = random_one_form(C3, rng(seed), degree=3)
    assert vanishes(exterior_d(exterior_d(a)), C3, tol=1e-12)


@given(seeds)
def test_cartan_and_coordinate_lie_derivatives_agree(seed):
    r = rng(seed)
    X, a = random_vector_field(C3, r), random_one_form(C3, r)
    assert vanishes(lie_derivative(X, a) - lie_derivative_direct(X, a), C3)
    w = wedge(random_one_form(C3, r), a)
    assert vanishes(lie_derivative(X, w) - lie_derivative_direct(X, w), C3)


@given(seeds)
def test_schouten_with_vector_is_lie_derivative(seed):
    r = rng(seed)
    X, P = random_vector_field(C3, r), random_bivector(C3, r)
    assert vanishes(schouten(X, P) - lie_derivative_bivector_direct(X, P), C3)


@given(seeds)
def test_schouten_of_vectors_is_lie_bracket(seed):
    r = rng(seed)
    X, Y = random_vector_field(C3, r), random_vector_field(C3, r)
    assert vanishes(schouten(X, Y) - lie_bracket(X, Y), C3)


@given(seeds)
def test_lie_bracket_jacobi_identity(seed):
    r = rng(seed)
    X, Y, Z = (random_vector_field(C3, r) for _ in range(3))
    s = (lie_bracket(X, lie_bracket(Y, Z)) + lie_bracket(Y, lie_bracket(Z, X))
         + lie_bracket(Z, lie_bracket(X, Y)))
    assert vanishes(s, C3)


def test_lie_poisson_bivector_squares_to_zero():
    P = Multivector(C3, 2, {(0, 1): C3.parse("z"), (1, 2): C3.parse("x"),
                            (2, 0): C3.parse("y")})
    assert all(c.is_const(0) for c in schouten(P, P).comps.values())


def test_non_poisson_bivector_has_nonzero_square():
    P = Multivector(C3, 2, {(0, 1): 1, (1, 2): C3.parse("y")})
    assert not vanishes(schouten(P, P), C3)


@given(seeds)
def test_bracket_anchor_defect_is_half_schouten_square(seed):
    # gamma(sharp[a,b] - [sharp a, sharp b]) = 1/2 [P,P](a,b,gamma)
    r = rng(seed)
    P = random_bivector(C3, r, degree=1)
    a, b = random_one_form(C3, r, degree=1), random_one_form(C3, r, degree=1)
    PP = schouten(P, P)
    defect = sharp_pi(P, koszul(P, a, b)) - lie_bracket(sharp_pi(P, a), sharp_pi(P, b))
    for k in range(3):
        g = OneForm.basis(C3, k)
        assert vanishes(g(defect) - PP(a, b, g) / 2, C3)


def test_sharp_contracts_first_slot():
    P = Multivector(C3, 2, {(0, 1): 1})
    v = sharp_pi(P, OneForm.basis(C3, 0))
    assert v.comps[1].is_const(1) and v.comps[0].is_const(0)
