"""Differential operators on coordinate tensor fields.

Sign conventions (fixed once, checked by the test suite):

* ``(d a)_ij = d_i a_j - d_j a_i`` and
  ``(d w)_ijk = d_i w_jk - d_j w_ik + d_k w_ij``;
* ``(sharp_pi a)^j = a_i pi^ij`` so that ``b(sharp_pi a) = pi(a, b)``;
* bivector bracket ``[P, Q]^ijk = sum over cyclic (ijk) of
  P^li d_l Q^jk + Q^li d_l P^jk``, which gives
  ``b(sharp[a, b]_pi - [sharp a, sharp b]) = 1/2 [pi, pi](a, b, c)``.
"""
from __future__ import annotations

import itertools

from .expr import ZERO, Expr, as_expr, diff, simplify
from .expr.core import n_add, n_mul
from .manifold import (DegreeError, Form, GeometryError, Multivector, OneForm, VectorField,
                       _check_chart, as_alternating, interior, lower_degree, pair)


def _d(e, i):
    return diff(e, i) if e.depends_on(i) else ZERO


def differential(f, chart) -> OneForm:
    f = simplify(as_expr(f))
    return OneForm(chart, [_d(f, i) for i in range(chart.dim)])


def exterior_d(w, chart=None):
    """Exterior derivative of a 0-, 1- or 2-form.  Scalars need ``chart``."""
    if isinstance(w, (Expr, int, float)):
        if chart is None:
            raise GeometryError("the differential of a scalar needs a chart")
        return differential(w, chart)
    W = as_alternating(w)
    if not isinstance(W, Form):
        raise TypeError("exterior derivative needs a differential form")
    p = W.degree
    n = W.chart.dim
    if p + 1 > 3:
        raise DegreeError("exterior derivative would exceed degree 3")
    if p + 1 > n:
        raise DegreeError(f"degree {p + 1} exceeds the dimension {n}")
    if p == 0:
        return differential(W[()], W.chart)
    out = {}
    for K in itertools.combinations(range(n), p + 1):
        terms = []
        for k, i in enumerate(K):
            rest = K[:k] + K[k + 1:]
            c = W.comps.get(rest)
            if c is not None and c.depends_on(i):
                terms.append(n_mul([as_expr(-1 if k % 2 else 1), diff(c, i)]))
        if terms:
            out[K] = n_add(terms)
    return lower_degree(Form(W.chart, p + 1, out))


def lie_bracket(X, Y) -> VectorField:
    """``[X, Y]^i = X(Y^i) - Y(X^i)``."""
    _check_chart(X, Y)
    return VectorField(X.chart, [X(b) - Y(a) for a, b in zip(X.comps, Y.comps)])


def lie_derivative(X, T):
    """``L_X T`` for scalars, vector fields, forms (Cartan formula) and bivectors."""
    if not isinstance(X, VectorField):
        raise TypeError("Lie derivative along a non-vector field")
    if isinstance(T, (Expr, int, float)):
        return X(T)
    _check_chart(X, T)
    if isinstance(T, VectorField):
        return lie_bracket(X, T)
    if isinstance(T, (OneForm, Form)):
        W = as_alternating(T)
        if W.degree == 0:
            return X(W[()])
        chart = X.chart
        first = interior(X, exterior_d(T)) if W.degree < min(3, chart.dim) else None
        inner = interior(X, T)
        second = exterior_d(inner, chart)
        if first is None:
            return lie_derivative_direct(X, T)
        return first + second
    if isinstance(T, Multivector):
        if T.degree != 2:
            raise DegreeError("Lie derivative of multivectors is implemented for bivectors")
        return schouten(X, T)
    raise TypeError(f"cannot take the Lie derivative of {type(T).__name__}")


def lie_derivative_direct(X, T):
    """Coordinate formula ``(L_X w)_I = X^l d_l w_I + sum_k w_{I[k->l]} d_{i_k} X^l``."""
    if isinstance(T, VectorField):
        return lie_bracket(X, T)
    W = as_alternating(T)
    _check_chart(X, W)
    if not isinstance(W, Form):
        raise TypeError("direct Lie derivative is for differential forms")
    n = W.chart.dim
    out = {}
    for I in W.index_tuples():
        terms = [X(W[I])]
        for k, ik in enumerate(I):
            for l in range(n):
                dX = _d(X.comps[l], ik)
                if dX.is_const(0):
                    continue
                J = I[:k] + (l,) + I[k + 1:]
                terms.append(n_mul([W[J], dX]))
        out[I] = n_add(terms)
    return lower_degree(Form(W.chart, W.degree, out))


def lie_derivative_bivector_direct(X, P) -> Multivector:
    """``(L_X P)^ij = X(P^ij) - P(d X^i, dx^j) - P(dx^i, d X^j)`` by evaluation."""
    _check_chart(X, P)
    chart = P.chart
    dX = [differential(c, chart) for c in X.comps]
    basis = [OneForm.basis(chart, i) for i in range(chart.dim)]
    out = {}
    for i, j in P.index_tuples():
        out[(i, j)] = X(P[i, j]) - P(dX[i], basis[j]) - P(basis[i], dX[j])
    return Multivector(chart, 2, out)


def _as_mv(P):
    if isinstance(P, VectorField):
        return as_alternating(P)
    if isinstance(P, Multivector):
        return P
    raise TypeError("Schouten bracket needs vector fields or multivectors")


def schouten(P, Q):
    """Schouten bracket for degrees (1,1), (1,2), (2,1) and (2,2)."""
    A, B = _as_mv(P), _as_mv(Q)
    _check_chart(A, B)
    p, q = A.degree, B.degree
    chart = A.chart
    n = chart.dim
    if p + q - 1 > 3 or p not in (1, 2) or q not in (1, 2):
        raise DegreeError(f"Schouten bracket of degrees ({p}, {q}) is not supported")
    if p + q - 1 > n:
        raise DegreeError(f"degree {p + q - 1} exceeds the dimension {n}")
    if p == 1 and q == 1:
        return lie_bracket(lower_degree(A), lower_degree(B))
    if p == 2 and q == 1:
        return -schouten(B, A)
    if p == 1:
        X = lower_degree(A)
        out = {}
        for i, j in B.index_tuples():
            terms = [X(B[i, j])]
            for l in range(n):
                dxi, dxj = _d(X.comps[i], l), _d(X.comps[j], l)
                if not dxi.is_const(0):
                    terms.append(-n_mul([B[l, j], dxi]))
                if not dxj.is_const(0):
                    terms.append(-n_mul([B[i, l], dxj]))
            out[(i, j)] = n_add(terms)
        return Multivector(chart, 2, out)
    out = {}
    for i, j, k in itertools.combinations(range(n), 3):
        terms = []
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            for l in range(n):
                pla, qla = A[l, a], B[l, a]
                if not pla.is_const(0):
                    terms.append(n_mul([pla, _d(B[b, c], l)]))
                if not qla.is_const(0):
                    terms.append(n_mul([qla, _d(A[b, c], l)]))
        out[(i, j, k)] = n_add(terms)
    return Multivector(chart, 3, out)


def sharp_pi(pi, alpha) -> VectorField:
    """Contraction of a bivector with a 1-form in its first slot."""
    if not isinstance(alpha, OneForm):
        raise TypeError("sharp_pi needs a OneForm")
    _check_chart(pi, alpha)
    n = pi.chart.dim
    return VectorField(pi.chart, [n_add([n_mul([alpha.comps[i], pi[i, j]])
                                         for i in range(n) if i != j])
                                  for j in range(n)])


def sharp_matrix(pi):
    """Matrix ``M`` with ``(sharp_pi a)^j = M[j][i] a_i``."""
    n = pi.chart.dim
    return tuple(tuple(pi[i, j] for i in range(n)) for j in range(n))


def koszul(pi, alpha, beta) -> OneForm:
    """``[a, b]_pi = L_{sharp a} b - L_{sharp b} a - d(pi(a, b))``."""
    _check_chart(pi, alpha, beta)
    chart = pi.chart
    return (lie_derivative(sharp_pi(pi, alpha), beta)
            - lie_derivative(sharp_pi(pi, beta), alpha)
            - differential(pi(alpha, beta), chart))


__all__ = [
    "differential", "exterior_d", "koszul", "lie_bracket", "lie_derivative",
    "lie_derivative_bivector_direct", "lie_derivative_direct", "schouten", "sharp_matrix",
    "sharp_pi", "pair",
]
