"""Levi-Civita connection, the contravariant derivative of a Jacobi pair with a
metric, and the compatibility tensors.

Objects attached to ``(pi, xi, g)``:

* ``g_inv`` - the cometric ``g*``;
* ``J = sharp_pi o flat_g`` on vectors and ``J* = flat_g o sharp_pi`` on covectors,
  so that ``g(J sharp_g a, sharp_g b) = pi(a, b)``;
* ``lam = g(xi, xi) flat_g(xi) - flat_g(J xi)``.

The contravariant derivative ``D`` is obtained from the six-term Koszul-type
formula evaluated at ``c = dx^k``, then lowered with ``g``::

    2 g*(D_a b, c) = sharp(a) g*(b, c) + sharp(b) g*(a, c) - sharp(c) g*(a, b)
                     - g*([b, c], a) - g*([a, c], b) + g*([a, b], c)

with ``sharp = sharp_{pi,xi}`` and ``[., .]`` the lambda-bracket for ``lam``.

``D pi`` is the derivation extension
``D pi(a, b, c) = sharp(a) pi(b, c) - pi(D_a b, c) - pi(b, D_a c)``, and the two
compatibility defects are related by ``defect2(a, b, c) = g*(defect1(a, b), c)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .calculus import lie_bracket
from .expr import ZERO, diff, evaluate_many
from .expr.core import n_add, n_mul
from .jacobi_algebroid import (JacobiData, anchor_defect, basis_forms, lambda_bracket,
                               sharp_pi_xi)
from .manifold import (EndoField, GeometryError, MetricField, OneForm, SingularMatrixError,
                       VectorField, _check_chart, mat_mul, mat_vec, pair, random_one_form,
                       random_vector_field, sym_inverse)
from .report import context_for

HALF = Fraction(1, 2)


@dataclass(eq=False)
class MetricPackage:
    j: JacobiData
    g: MetricField
    g_inv: tuple
    christoffel: tuple          # christoffel[k][i][j] = Gamma^k_ij
    J: EndoField
    J_star: EndoField
    lam: OneForm
    _D_cache: dict = field(default_factory=dict, repr=False)

    @property
    def chart(self):
        return self.g.chart

    @property
    def pi(self):
        return self.j.pi

    @property
    def xi(self):
        return self.j.xi


def christoffel_symbols(g: MetricField, g_inv=None):
    n = g.chart.dim
    G = g.comps
    g_inv = sym_inverse(G, g.chart) if g_inv is None else g_inv
    dg = [[[diff(G[a][b], c) if G[a][b].depends_on(c) else ZERO for c in range(n)]
           for b in range(n)] for a in range(n)]
    # first kind: [ij, l] = 1/2 (d_i g_lj + d_j g_li - d_l g_ij)
    first = [[[HALF * (dg[l][j][i] + dg[l][i][j] - dg[i][j][l]) for l in range(n)]
              for j in range(n)] for i in range(n)]
    return tuple(tuple(tuple(n_add([n_mul([g_inv[k][l], first[i][j][l]]) for l in range(n)
                                    if not first[i][j][l].is_const(0)])
                             for j in range(n)) for i in range(n)) for k in range(n))


def build_package(j: JacobiData, g: MetricField, check=True, ctx=None) -> MetricPackage:
    """Derive g*, Christoffel symbols, J, J* and lambda; optionally verify the invariants."""
    if not isinstance(j, JacobiData):
        raise TypeError("build_package needs JacobiData")
    _check_chart(j.pi, g)
    chart = g.chart
    n = chart.dim
    G = g.comps
    g_inv = sym_inverse(G, chart)
    pi = j.pi
    # J^b_i = pi^{ab} g_ai ; (J* a)_c = g_cb pi^{ab} a_a
    J = EndoField(chart, [[n_add([n_mul([pi[a, b], G[a][i]]) for a in range(n)])
                           for i in range(n)] for b in range(n)])
    J_star = EndoField(chart, [[n_add([n_mul([G[c][b], pi[a, b]]) for b in range(n)])
                                for a in range(n)] for c in range(n)], covariant=True)
    xi = j.xi
    flat_xi = OneForm(chart, mat_vec(G, xi.comps))
    lam = g(xi, xi) * flat_xi - OneForm(chart, mat_vec(G, J(xi).comps))
    pkg = MetricPackage(j.with_lambda(lam), g, g_inv, christoffel_symbols(g, g_inv),
                        J, J_star, lam)
    if check:
        ctx = context_for(chart, ctx)
        prod = mat_mul(g_inv, G)
        res = [prod[a][b] - (1 if a == b else 0) for a in range(n) for b in range(n)]
        lifted = mat_mul(mat_mul(g_inv, J_star.comps), G)
        res += [lifted[a][b] - J.comps[a][b] for a in range(n) for b in range(n)]
        pp = ctx.per_point(res)
        if pp.max() >= 1e-9:
            raise SingularMatrixError(
                f"metric package invariants fail at sample points (residual {pp.max():.3e})")
    return pkg


# -- musical isomorphisms ------------------------------------------------------

def _metric_of(obj):
    return obj.g if isinstance(obj, MetricPackage) else obj


def _inverse_of(obj):
    if isinstance(obj, MetricPackage):
        return obj.g_inv
    return sym_inverse(obj.comps, obj.chart)


def musical(obj, alpha) -> VectorField:
    """Index raising ``sharp_g``."""
    _check_chart(_metric_of(obj), alpha)
    return VectorField(alpha.chart, mat_vec(_inverse_of(obj), alpha.comps))


def musical_flat(obj, X) -> OneForm:
    """Index lowering ``flat_g``."""
    g = _metric_of(obj)
    _check_chart(g, X)
    return OneForm(X.chart, mat_vec(g.comps, X.comps))


def cometric(obj, alpha, beta):
    inv = _inverse_of(obj)
    n = alpha.chart.dim
    return n_add([n_mul([inv[i][k], alpha.comps[i], beta.comps[k]])
                  for i in range(n) for k in range(n)
                  if not inv[i][k].is_const(0)])


# -- covariant derivative --------------------------------------------------------

def nabla(pkg, X, Y) -> VectorField:
    """``(nabla_X Y)^k = X(Y^k) + Gamma^k_ij X^i Y^j``."""
    G = pkg.christoffel
    n = pkg.chart.dim
    comps = []
    for k in range(n):
        terms = [X(Y.comps[k])]
        for i in range(n):
            if X.comps[i].is_const(0):
                continue
            for jj in range(n):
                if not G[k][i][jj].is_const(0) and not Y.comps[jj].is_const(0):
                    terms.append(n_mul([G[k][i][jj], X.comps[i], Y.comps[jj]]))
        comps.append(n_add(terms))
    return VectorField(pkg.chart, comps)


def nabla_endo(pkg, A: EndoField, X, Y) -> VectorField:
    """``(nabla_X A) Y = nabla_X(A Y) - A(nabla_X Y)``."""
    return nabla(pkg, X, A(Y)) - A(nabla(pkg, X, Y))


def nabla_form(pkg, omega, X, Y, Z):
    """``nabla w(X, Y, Z) = X w(Y, Z) - w(nabla_X Y, Z) - w(Y, nabla_X Z)``."""
    return X(omega(Y, Z)) - omega(nabla(pkg, X, Y), Z) - omega(Y, nabla(pkg, X, Z))


def nabla_metric(pkg, X, Y, Z):
    g = pkg.g
    return X(g(Y, Z)) - g(nabla(pkg, X, Y), Z) - g(Y, nabla(pkg, X, Z))


def torsion(pkg, X, Y) -> VectorField:
    return nabla(pkg, X, Y) - nabla(pkg, Y, X) - lie_bracket(X, Y)


# -- contravariant derivative ------------------------------------------------------

def _memo(pkg, tag, alpha, beta, build):
    # expressions are interned, so component tuples are cheap exact keys
    key = (tag, alpha.comps, beta.comps)
    cache = pkg._D_cache
    if key not in cache:
        cache[key] = build()
    return cache[key]


def metric_bracket(pkg, alpha, beta) -> OneForm:
    """Lambda-bracket with the package lambda."""
    return _memo(pkg, "bracket", alpha, beta,
                 lambda: lambda_bracket(pkg.j, alpha, beta, pkg.lam))


def contravariant_D(pkg, alpha, beta) -> OneForm:
    """``D_a b`` from the Koszul-type formula evaluated on ``c = dx^k``."""
    return _memo(pkg, "D", alpha, beta, lambda: _contravariant_D(pkg, alpha, beta))


def _contravariant_D(pkg, alpha, beta) -> OneForm:
    chart = pkg.chart
    n = chart.dim
    j = pkg.j
    gs = lambda a, b: cometric(pkg, a, b)  # noqa: E731
    sa, sb = sharp_pi_xi(j, alpha), sharp_pi_xi(j, beta)
    ab = metric_bracket(pkg, alpha, beta)
    g_ab = gs(alpha, beta)
    R = []
    for k, dk in enumerate(basis_forms(chart)):
        terms = [sa(gs(beta, dk)), sb(gs(alpha, dk)), -sharp_pi_xi(j, dk)(g_ab),
                 -gs(metric_bracket(pkg, beta, dk), alpha),
                 -gs(metric_bracket(pkg, alpha, dk), beta),
                 gs(ab, dk)]
        R.append(n_add(terms))
    G = pkg.g.comps
    return OneForm(chart, [HALF * n_add([n_mul([G[jj][k], R[k]]) for k in range(n)
                                         if not G[jj][k].is_const(0)])
                           for jj in range(n)])


def D_basis(pkg):
    """``D_{dx^i} dx^j`` for every ordered pair, cached on the package."""
    if "basis" not in pkg._D_cache:
        B = basis_forms(pkg.chart)
        pkg._D_cache["basis"] = [[contravariant_D(pkg, a, b) for b in B] for a in B]
    return pkg._D_cache["basis"]


def D_pi(pkg, alpha, beta, gamma):
    pi = pkg.pi
    return (sharp_pi_xi(pkg.j, alpha)(pi(beta, gamma))
            - pi(contravariant_D(pkg, alpha, beta), gamma)
            - pi(beta, contravariant_D(pkg, alpha, gamma)))


def D_J_star(pkg, alpha, beta) -> OneForm:
    """``(D_a J*) b = D_a(J* b) - J*(D_a b)``."""
    return contravariant_D(pkg, alpha, pkg.J_star(beta)) - pkg.J_star(contravariant_D(pkg, alpha, beta))


def compatibility_defect_trilinear(pkg, alpha, beta, gamma):
    xi, pi, Js = pkg.xi, pkg.pi, pkg.J_star
    rhs = HALF * (pair(gamma, xi) * pi(alpha, beta) - pair(beta, xi) * pi(alpha, gamma)
                  - pair(Js(gamma), xi) * cometric(pkg, alpha, beta)
                  + pair(Js(beta), xi) * cometric(pkg, alpha, gamma))
    return D_pi(pkg, alpha, beta, gamma) - rhs


def compatibility_defect_endo(pkg, alpha, beta) -> OneForm:
    xi, pi, Js = pkg.xi, pkg.pi, pkg.J_star
    flat_xi = musical_flat(pkg, xi)
    rhs = HALF * (pi(alpha, beta) * flat_xi - pair(beta, xi) * Js(alpha)
                  + cometric(pkg, alpha, beta) * Js(flat_xi) + pair(Js(beta), xi) * alpha)
    return D_J_star(pkg, alpha, beta) - rhs


# -- checks ---------------------------------------------------------------------------

def _basis_pairs(chart, ordered=True):
    B = basis_forms(chart)
    n = len(B)
    return [(B[a], B[b]) for a in range(n) for b in range(n) if ordered or a <= b]


def _random_forms(pkg, ctx, n):
    return [random_one_form(pkg.chart, ctx.rng, degree=1, n_terms=2) for _ in range(n)]


def check_D_properties(pkg, ctx=None, n_random=3, **kw):
    """Metric compatibility and bracket symmetry of ``D``."""
    chart = pkg.chart
    ctx = context_for(chart, ctx, **kw)
    j = pkg.j
    B = basis_forms(chart)
    triples = [(a, b, c) for a in B for b in B for c in B]
    rand = _random_forms(pkg, ctx, 3 * n_random)
    triples += [tuple(rand[3 * t:3 * t + 3]) for t in range(n_random)]
    metric_res, sym_res = [], []
    Dcache = {}

    def D(a, b):
        key = (id(a), id(b))
        if key not in Dcache:
            Dcache[key] = contravariant_D(pkg, a, b)
        return Dcache[key]

    for a, b, c in triples:
        metric_res.append(sharp_pi_xi(j, a)(cometric(pkg, b, c))
                          - cometric(pkg, D(a, b), c) - cometric(pkg, b, D(a, c)))
    for a, b, _ in triples:
        sym_res.append(D(a, b) - D(b, a) - metric_bracket(pkg, a, b))
    parts = [ctx.report("D-metric", "sharp(a) g*(b,c) = g*(D_a b, c) + g*(b, D_a c)",
                        metric_res),
             ctx.report("D-symmetric", "D_a b - D_b a = [a,b]^g", sym_res)]
    return ctx.combine("contravariant-D", "D is metric and bracket-symmetric", parts)


def isometry_check(pkg, ctx=None, **kw):
    """``g(sharp a, sharp b) = g*(a, b)`` on a covector basis."""
    ctx = context_for(pkg.chart, ctx, **kw)
    j = pkg.j
    res = [pkg.g(sharp_pi_xi(j, a), sharp_pi_xi(j, b)) - cometric(pkg, a, b)
           for a, b in _basis_pairs(pkg.chart, ordered=False)]
    return ctx.report("isometry", "g(sharp a, sharp b) = g*(a, b)", res)


def pre_lie_check(pkg, ctx=None, **kw):
    """Anchor defect of the lambda-bracket on basis pairs (vanishes for a pre-Lie algebroid)."""
    ctx = context_for(pkg.chart, ctx, **kw)
    B = basis_forms(pkg.chart)
    res = [anchor_defect(pkg.j, a, b, pkg.lam, force=True)
           for i, a in enumerate(B) for b in B[i + 1:]]
    return ctx.report("pre-lie", "sharp([a,b]^g) = [sharp a, sharp b]", res)


def check_prop_LC(pkg, ctx=None, n_random=2, force=False, **kw):
    """``sharp(D_a b) = nabla_{sharp a} sharp b`` under its preconditions.

    ``force`` computes the residual even when the preconditions fail.
    """
    ctx = context_for(pkg.chart, ctx, **kw)
    name, anchor = "levi-civita-triplet", "sharp(D_a b) = nabla_{sharp a} sharp b"
    pre = [pre_lie_check(pkg, ctx), isometry_check(pkg, ctx)]
    note = ""
    if not pkg.j.verified:
        note = "not a verified Jacobi pair"
    elif not all(p.passed for p in pre):
        note = "failed: " + ", ".join(p.name for p in pre if not p.passed)
    if note and not force:
        return ctx.preconditions_failed(name, anchor, note, pre)
    j = pkg.j
    pairs = _basis_pairs(pkg.chart)
    rand = _random_forms(pkg, ctx, 2 * n_random)
    pairs += [(rand[2 * t], rand[2 * t + 1]) for t in range(n_random)]
    res = [sharp_pi_xi(j, contravariant_D(pkg, a, b))
           - nabla(pkg, sharp_pi_xi(j, a), sharp_pi_xi(j, b)) for a, b in pairs]
    rep = ctx.report(name, anchor, res, note=note and f"forced ({note})")
    rep.parts = pre
    return rep


def check_levi_civita_metric(pkg, ctx=None, n_random=2, **kw):
    """Self-test of the covariant connection: ``nabla g = 0`` and zero torsion."""
    chart = pkg.chart
    ctx = context_for(chart, ctx, **kw)
    E = [VectorField.basis(chart, i) for i in range(chart.dim)]
    E += [random_vector_field(chart, ctx.rng, degree=1, n_terms=2) for _ in range(n_random)]
    met = [nabla_metric(pkg, X, Y, Z) for X in E for Y in E for Z in E]
    tor = [torsion(pkg, X, Y) for X in E for Y in E]
    parts = [ctx.report("nabla-g", "nabla g = 0", met),
             ctx.report("torsion", "nabla_X Y - nabla_Y X = [X,Y]", tor)]
    return ctx.combine("levi-civita", "metric and torsion-free", parts)


def compatibility_check(pkg, ctx=None, **kw):
    """Both compatibility defects on a full basis, their cross-identity, and joint vanishing.

    The verdict is ``pass`` when both defects vanish, ``fail`` when both are
    nonzero, and ``theorem-violated`` when exactly one vanishes or the
    cross-identity breaks.
    """
    chart = pkg.chart
    ctx = context_for(chart, ctx, **kw)
    B = basis_forms(chart)
    d2, d1, cross = [], [], []
    for a in B:
        for b in B:
            e = compatibility_defect_endo(pkg, a, b)
            d1.append(e)
            for c in B:
                t = compatibility_defect_trilinear(pkg, a, b, c)
                d2.append(t)
                cross.append(t - cometric(pkg, e, c))
    r2 = ctx.report("compatibility-trilinear",
                    "D pi(a,b,c) = 1/2(c(xi)pi(a,b) - b(xi)pi(a,c) - J*c(xi)g*(a,b) "
                    "+ J*b(xi)g*(a,c))", d2)
    r1 = ctx.report("compatibility-endomorphism",
                    "(D_a J*)b = 1/2(pi(a,b)flat xi - b(xi)J*a + g*(a,b)J* flat xi "
                    "+ J*b(xi)a)", d1)
    rc = ctx.report("compatibility-cross", "defect2(a,b,c) = g*(defect1(a,b), c)", cross)
    parts = [r2, r1, rc]
    anchor = "(pi, xi, g) compatibility"
    if not rc.passed or r1.passed != r2.passed:
        rep = ctx.combine("compatibility", anchor, parts)
        rep.verdict = "theorem-violated"
        return rep
    rep = ctx.combine("compatibility", anchor, [r2, r1])
    rep.parts = parts
    return rep


def check_D_pi_formula(pkg, omega, ctx=None, **kw):
    """``D pi(a, b, c) = nabla w(sharp a, sharp b, sharp c)`` on a covector basis."""
    ctx = context_for(pkg.chart, ctx, **kw)
    j = pkg.j
    B = basis_forms(pkg.chart)
    S = [sharp_pi_xi(j, a) for a in B]
    n = len(B)
    res = [D_pi(pkg, B[a], B[b], B[c]) - nabla_form(pkg, omega, S[a], S[b], S[c])
           for a in range(n) for b in range(n) for c in range(b + 1, n)]
    return ctx.report("D-pi-nabla-omega", "D pi(a,b,c) = nabla w(sharp a, sharp b, sharp c)",
                      res)


def pointwise_invertible(pkg, ctx=None):
    ctx = context_for(pkg.chart, ctx)
    from .manifold import determinant
    d = determinant(pkg.g.comps)
    vals = evaluate_many([d], ctx.pts)[0]
    return bool(np.all(np.abs(vals) > 1e-12))


__all__ = [
    "D_J_star", "D_basis", "D_pi", "MetricPackage", "build_package", "check_D_pi_formula",
    "check_D_properties", "check_levi_civita_metric", "check_prop_LC", "christoffel_symbols",
    "cometric", "compatibility_check", "compatibility_defect_endo",
    "compatibility_defect_trilinear", "contravariant_D", "isometry_check", "metric_bracket",
    "musical", "musical_flat", "nabla", "nabla_endo", "nabla_form", "nabla_metric",
    "pointwise_invertible", "pre_lie_check", "torsion", "GeometryError",
]
