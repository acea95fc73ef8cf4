"""Jacobi pairs and the deformed cotangent algebroid.

For a bivector ``pi`` and a vector field ``xi`` the anchor is
``sharp_{pi,xi}(a) = sharp_pi(a) + a(xi) xi`` and, given a 1-form ``lam``,
the bracket on 1-forms is

    [a, b]^lam = [a, b]_pi + a(xi)(L_xi b - b) - b(xi)(L_xi a - a) - pi(a, b) lam.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from .calculus import differential, koszul, lie_bracket, lie_derivative, schouten, sharp_pi
from .expr import ZERO, as_expr
from .manifold import (GeometryError, Multivector, OneForm, VectorField, _check_chart, pair,
                       random_one_form, random_polynomial, wedge)
from .report import context_for

HALF = Fraction(1, 2)


class NotJacobiError(GeometryError):
    """An operation that assumes a Jacobi pair got unverified data."""


@dataclass(frozen=True)
class JacobiData:
    chart: object
    pi: Multivector
    xi: VectorField
    lam: OneForm | None = None
    verified: bool = False

    def __post_init__(self):
        if not isinstance(self.pi, Multivector) or self.pi.degree != 2:
            raise GeometryError("pi must be a bivector")
        if not isinstance(self.xi, VectorField):
            raise GeometryError("xi must be a vector field")
        _check_chart(self.pi, self.xi)
        if self.pi.chart != self.chart:
            raise GeometryError("pi lives on a different chart")
        if self.lam is not None:
            if not isinstance(self.lam, OneForm):
                raise GeometryError("lambda must be a 1-form")
            _check_chart(self.pi, self.lam)

    @classmethod
    def of(cls, pi, xi=None, lam=None):
        chart = pi.chart
        return cls(chart, pi, VectorField.zero(chart) if xi is None else xi, lam)

    def with_lambda(self, lam):
        return replace(self, lam=lam)

    def need_lambda(self, lam=None):
        lam = self.lam if lam is None else lam
        if lam is None:
            raise GeometryError("this operation needs a 1-form lambda")
        return lam


def sharp_pi_xi(j: JacobiData, alpha) -> VectorField:
    return sharp_pi(j.pi, alpha) + pair(alpha, j.xi) * j.xi


def sharp_pi_xi_matrix(j: JacobiData):
    """Matrix ``M`` with ``sharp_{pi,xi}(a)^r = M[r][s] a_s``."""
    n = j.chart.dim
    xi = j.xi.comps
    return tuple(tuple(j.pi[s, r] + xi[s] * xi[r] for s in range(n)) for r in range(n))


def lambda_bracket(j: JacobiData, alpha, beta, lam=None) -> OneForm:
    lam = j.need_lambda(lam)
    xi = j.xi
    a_xi, b_xi = pair(alpha, xi), pair(beta, xi)
    out = koszul(j.pi, alpha, beta)
    if not xi.is_zero():
        out = (out + a_xi * (lie_derivative(xi, beta) - beta)
               - b_xi * (lie_derivative(xi, alpha) - alpha))
    if not lam.is_zero():
        out = out - j.pi(alpha, beta) * lam
    return out


def jacobi_tensors(pi, xi):
    """``([pi, pi] - 2 xi ^ pi, L_xi pi)``; the first is ``None`` below dimension 3."""
    _check_chart(pi, xi)
    trivector = None
    if pi.chart.dim >= 3:
        trivector = schouten(pi, pi) - 2 * wedge(xi, pi)
    return trivector, lie_derivative(xi, pi)


def is_jacobi(pi, xi=None, ctx=None, **kw):
    chart = pi.chart
    xi = VectorField.zero(chart) if xi is None else xi
    ctx = context_for(chart, ctx, **kw)
    tri, lie = jacobi_tensors(pi, xi)
    parts = []
    if tri is not None:
        parts.append(ctx.report("schouten-square", "[pi,pi] - 2 xi^pi = 0", tri))
    else:
        parts.append(ctx.from_values("schouten-square", "[pi,pi] - 2 xi^pi = 0",
                                     [0.0] * ctx.n_points, note="trivially zero below dim 3"))
    parts.append(ctx.report("xi-preserves-pi", "L_xi pi = 0", lie))
    return ctx.combine("jacobi", "[pi,pi] = 2 xi^pi and L_xi pi = 0", parts)


def verify(j: JacobiData, ctx=None, **kw):
    """Run :func:`is_jacobi` and return ``(data tagged verified-or-not, report)``."""
    rep = is_jacobi(j.pi, j.xi, ctx, **kw)
    return replace(j, verified=rep.passed), rep


def _require(j, force):
    if not (j.verified or force):
        raise NotJacobiError("data is not tagged as a verified Jacobi pair; "
                             "run verify() or pass force=True")


def anchor_defect(j: JacobiData, alpha, beta, lam=None, force=False) -> VectorField:
    """``sharp([a, b]^lam) - [sharp a, sharp b]``."""
    _require(j, force)
    return (sharp_pi_xi(j, lambda_bracket(j, alpha, beta, lam))
            - lie_bracket(sharp_pi_xi(j, alpha), sharp_pi_xi(j, beta)))


def anchor_defect_predicted(j: JacobiData, alpha, beta, lam=None) -> VectorField:
    """``pi(a, b)(xi - sharp(lam))``, the closed form of the anchor defect."""
    lam = j.need_lambda(lam)
    return j.pi(alpha, beta) * (j.xi - sharp_pi_xi(j, lam))


def jacobiator(j: JacobiData, alpha, beta, gamma, lam=None) -> OneForm:
    def br(a, b):
        return lambda_bracket(j, a, b, lam)
    return (br(br(alpha, beta), gamma) + br(br(beta, gamma), alpha)
            + br(br(gamma, alpha), beta))


def leibniz_defect(j: JacobiData, alpha, beta, phi, lam=None) -> OneForm:
    """``[a, phi b] - phi [a, b] - (sharp(a) phi) b``."""
    phi = as_expr(phi)
    return (lambda_bracket(j, alpha, phi * beta, lam) - phi * lambda_bracket(j, alpha, beta, lam)
            - sharp_pi_xi(j, alpha)(phi) * beta)


def basis_forms(chart):
    return [OneForm.basis(chart, i) for i in range(chart.dim)]


def _pairs(chart, ctx, n_random, **kw):
    basis = basis_forms(chart)
    out = [(a, b) for i, a in enumerate(basis) for b in basis[i + 1:]]
    for _ in range(n_random):
        out.append((random_one_form(chart, ctx.rng, **kw), random_one_form(chart, ctx.rng, **kw)))
    return out


def check_anchor_identity(j: JacobiData, lam=None, ctx=None, n_random=10, force=False, **kw):
    """Residual of ``sharp([a,b]^lam) - [sharp a, sharp b] - pi(a,b)(xi - sharp lam)``."""
    lam = j.need_lambda(lam)
    ctx = context_for(j.chart, ctx, **kw)
    if not (j.verified or force):
        return ctx.preconditions_failed("anchor-identity", _ANCHOR_ID, "not a verified Jacobi pair")
    res = [anchor_defect(j, a, b, lam) - anchor_defect_predicted(j, a, b, lam)
           for a, b in _pairs(j.chart, ctx, n_random, degree=1)]
    return ctx.report("anchor-identity", _ANCHOR_ID, res)


_ANCHOR_ID = "sharp([a,b]^lam) - [sharp a, sharp b] = pi(a,b)(xi - sharp lam)"


def check_jacobiator(j: JacobiData, lam=None, ctx=None, n_random=2, **kw):
    """Jacobiator of the lambda-bracket on basis triples and random exact/linear forms."""
    lam = j.need_lambda(lam)
    chart = j.chart
    ctx = context_for(chart, ctx, **kw)
    basis = basis_forms(chart)
    n = chart.dim
    triples = [(basis[a], basis[b], basis[c]) for a in range(n) for b in range(a + 1, n)
               for c in range(b + 1, n)]
    for _ in range(n_random):
        triples.append(tuple(random_one_form(chart, ctx.rng, degree=1, n_terms=2)
                             for _ in range(3)))
    res = [jacobiator(j, a, b, c, lam) for a, b, c in triples]
    return ctx.report("jacobiator", "cyclic [[a,b],c] = 0", res)


def check_leibniz(j: JacobiData, lam=None, ctx=None, n_random=5, **kw):
    lam = j.need_lambda(lam)
    chart = j.chart
    ctx = context_for(chart, ctx, **kw)
    res = []
    for _ in range(n_random):
        a, b = random_one_form(chart, ctx.rng), random_one_form(chart, ctx.rng)
        res.append(leibniz_defect(j, a, b, random_polynomial(chart, ctx.rng), lam))
    return ctx.report("leibniz", "[a, f b] = f [a,b] + (sharp(a) f) b", res)


def check_poisson_identities(pi, ctx=None, n_random=10, **kw):
    """Bracket-anchor identity and the Jacobiator identity on exact forms for a bivector."""
    chart = pi.chart
    ctx = context_for(chart, ctx, **kw)
    S = schouten(pi, pi) if chart.dim >= 3 else None
    anchor, jac = [], []
    for _ in range(n_random):
        a, b, c = (random_one_form(chart, ctx.rng) for _ in range(3))
        lhs = pair(c, sharp_pi(pi, koszul(pi, a, b))
                   - lie_bracket(sharp_pi(pi, a), sharp_pi(pi, b)))
        rhs = HALF * S(a, b, c) if S is not None else ZERO
        anchor.append(lhs - rhs)
        f, g, h = (random_polynomial(chart, ctx.rng) for _ in range(3))
        df, dg, dh = (differential(u, chart) for u in (f, g, h))

        def br(u, v):
            return koszul(pi, u, v)
        lhs = br(br(df, dg), dh) + br(br(dg, dh), df) + br(br(dh, df), dg)
        rhs = (-HALF) * differential(S(df, dg, dh), chart) if S is not None \
            else OneForm.zero(chart)
        jac.append(lhs - rhs)
    parts = [ctx.report("bracket-anchor", "c(sharp[a,b]_pi - [sharp a, sharp b]) = "
                        "1/2 [pi,pi](a,b,c)", anchor),
             ctx.report("exact-jacobiator", "cyclic [[df,dg],dh]_pi = "
                        "-1/2 d([pi,pi](df,dg,dh))", jac)]
    return ctx.combine("poisson-identities", "bracket-anchor and Jacobiator identities", parts)


__all__ = [
    "JacobiData", "NotJacobiError", "anchor_defect", "anchor_defect_predicted", "basis_forms",
    "check_anchor_identity", "check_jacobiator", "check_leibniz", "check_poisson_identities",
    "is_jacobi", "jacobi_tensors", "jacobiator", "lambda_bracket", "leibniz_defect",
    "sharp_pi_xi", "sharp_pi_xi_matrix", "verify",
]
