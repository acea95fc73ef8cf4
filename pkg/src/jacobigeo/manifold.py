"""Charts and typed tensor fields whose components are :class:`~jacobigeo.expr.Expr`.

Conventions used everywhere in the package:

* alternating tensors store only strictly increasing index tuples; reading a
  permuted tuple applies the sign of the permutation;
* evaluation of an alternating tensor on 1-forms (resp. vectors) is the
  determinant pairing, e.g. ``(xi ^ pi)(a, b, c) = a(xi) pi(b, c) - b(xi) pi(a, c)
  + c(xi) pi(a, b)`` and ``(dx ^ dy)(d/dx, d/dy) = 1``;
* an endomorphism ``A`` acts on vectors by ``(A X)^i = A[i][j] X^j`` and on
  covectors (``covariant=True``) by ``(A a)_i = A[i][j] a_j``.

Scalar fields are plain :class:`Expr` objects.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .expr import (ONE, ZERO, Expr, as_expr, coord, diff, evaluate_many,
                   expand, parse, simplify, to_string)
from .expr.core import n_add, n_mul

MAX_DEGREE = 3
ScalarField = Expr


class GeometryError(ValueError):
    """Base class for invalid geometric input."""


class ChartMismatch(GeometryError):
    pass


class DegreeError(GeometryError):
    pass


class SingularMatrixError(GeometryError):
    pass


class SamplingError(RuntimeError):
    """Rejection sampling could not find points away from the excluded loci."""


_RESERVED = {"exp", "ln", "sin", "cos", "d"}


@dataclass(frozen=True)
class Chart:
    """A coordinate chart: coordinate names plus loci avoided when sampling."""

    names: tuple
    excluded: tuple = field(default=())

    def __post_init__(self):
        names = tuple(self.names)
        if not names:
            raise GeometryError("a chart needs at least one coordinate")
        if len(set(names)) != len(names):
            raise GeometryError(f"coordinate names must be distinct: {names}")
        for n in names:
            if not n.isidentifier() or n in _RESERVED:
                raise GeometryError(f"invalid coordinate name {n!r}")
        object.__setattr__(self, "names", names)
        excl = tuple(parse(e, names) if isinstance(e, str) else simplify(e)
                     for e in self.excluded)
        for e in excl:
            if e.mask >> len(names):
                raise GeometryError("excluded locus uses an undeclared coordinate")
        object.__setattr__(self, "excluded", excl)

    @property
    def dim(self):
        return len(self.names)

    def coord(self, i):
        if isinstance(i, str):
            i = self.index(i)
        if not 0 <= i < self.dim:
            raise GeometryError(f"coordinate index {i} out of range for dim {self.dim}")
        return coord(i)

    def coords(self):
        return tuple(coord(i) for i in range(self.dim))

    def index(self, name):
        try:
            return self.names.index(name)
        except ValueError:
            raise GeometryError(f"unknown coordinate {name!r}") from None

    def parse(self, text):
        return parse(text, self.names)

    def fmt(self, e):
        return to_string(as_expr(e), self.names)

    def sample(self, n, seed=0, box=1.0, min_dist=0.1, max_rejections=1000):
        """``n`` points uniform in ``[-box, box]^dim`` with ``|h(p)| >= min_dist``
        for every excluded expression ``h``."""
        rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
        out = []
        rejections = 0
        while len(out) < n:
            cand = rng.uniform(-box, box, size=(max(n - len(out), 1), self.dim))
            if self.excluded:
                with np.errstate(all="ignore"):
                    try:
                        vals = evaluate_many(self.excluded, cand)
                        ok = np.all(np.abs(vals) >= min_dist, axis=0)
                    except ArithmeticError:
                        ok = np.array([self._point_ok(p, min_dist) for p in cand])
            else:
                ok = np.ones(len(cand), bool)
            for p, good in zip(cand, ok):
                if good and len(out) < n:
                    out.append(p)
                elif not good:
                    rejections += 1
                    if rejections > max_rejections:
                        raise SamplingError(
                            f"gave up after {max_rejections} rejected sample points")
        return np.array(out).reshape(n, self.dim)

    def _point_ok(self, p, min_dist):
        try:
            vals = evaluate_many(self.excluded, p[None, :])
        except ArithmeticError:
            return False
        return bool(np.all(np.abs(vals) >= min_dist))


def _check_chart(*objs):
    charts = [o.chart for o in objs if hasattr(o, "chart")]
    for c in charts[1:]:
        if c != charts[0]:
            raise ChartMismatch("objects live on different charts")
    return charts[0] if charts else None


def _exprs(comps, n=None):
    out = tuple(simplify(as_expr(c)) for c in comps)
    if n is not None and len(out) != n:
        raise GeometryError(f"expected {n} components, got {len(out)}")
    return out


def _lin(terms):
    """Sum of (coefficient, expr) products, normalized."""
    return n_add([n_mul([as_expr(c), as_expr(e)]) for c, e in terms])


class _Vectorlike:
    """Shared linear structure of VectorField and OneForm."""

    __slots__ = ("chart", "comps")

    def __init__(self, chart, comps):
        self.chart = chart
        self.comps = _exprs(comps, chart.dim)

    @classmethod
    def zero(cls, chart):
        return cls(chart, [ZERO] * chart.dim)

    @classmethod
    def basis(cls, chart, i):
        if isinstance(i, str):
            i = chart.index(i)
        return cls(chart, [ONE if k == i else ZERO for k in range(chart.dim)])

    def __getitem__(self, i):
        return self.comps[i]

    def __iter__(self):
        return iter(self.comps)

    def __len__(self):
        return len(self.comps)

    def _other(self, other):
        if type(other) is not type(self):
            return NotImplemented
        _check_chart(self, other)
        return other

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return type(self)(self.chart, [a + b for a, b in zip(self.comps, other.comps)])

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return type(self)(self.chart, [a - b for a, b in zip(self.comps, other.comps)])

    def __neg__(self):
        return type(self)(self.chart, [-a for a in self.comps])

    def __mul__(self, f):
        if isinstance(f, (_Vectorlike, Alternating)):
            return NotImplemented
        f = as_expr(f)
        return type(self)(self.chart, [f * a for a in self.comps])

    __rmul__ = __mul__

    def is_zero(self):
        return all(c.is_const(0) for c in self.comps)

    def components(self):
        return list(self.comps)

    def map(self, fn):
        return type(self)(self.chart, [fn(c) for c in self.comps])

    def __repr__(self):
        return self.display()


class VectorField(_Vectorlike):
    """Vector field ``X = X^i d/dx^i``."""

    __slots__ = ()

    def __call__(self, f):
        """Directional derivative ``X(f)`` of a scalar expression."""
        f = simplify(as_expr(f))
        return _lin((c, diff(f, i)) for i, c in enumerate(self.comps)
                    if not c.is_const(0) and f.depends_on(i))

    def display(self):
        return _linear_text(self.chart, self.comps, "d/d")


class OneForm(_Vectorlike):
    """Differential 1-form ``a = a_i dx^i``."""

    __slots__ = ()

    def __call__(self, X):
        return pair(self, X)

    def display(self):
        return _linear_text(self.chart, self.comps, "d")


def _linear_text(chart, comps, stem):
    out = []
    for c, n in zip(comps, chart.names):
        if c.is_const(0):
            continue
        basis = f"{stem}{n}"
        if c.is_const(1):
            term = basis
        elif c.is_const(-1):
            term = "-" + basis
        else:
            term = f"({chart.fmt(c)})*{basis}"
        if out and term.startswith("-"):
            out.append("- " + term[1:])
        else:
            out.append(("+ " if out else "") + term)
    return " ".join(out) or "0"


def _perm_sign(idx):
    """Sign of the permutation sorting ``idx`` (0 when an index repeats)."""
    idx = list(idx)
    if len(set(idx)) != len(idx):
        return 0
    sign = 1
    for i in range(len(idx)):
        for j in range(i + 1, len(idx)):
            if idx[i] > idx[j]:
                sign = -sign
    return sign


class Alternating:
    """Totally antisymmetric tensor of degree ``p`` stored on sorted index tuples."""

    family = None
    __slots__ = ("chart", "degree", "comps")

    def __init__(self, chart, degree, comps=None):
        if not 0 <= degree <= MAX_DEGREE:
            raise DegreeError(f"degree {degree} exceeds the supported maximum {MAX_DEGREE}")
        if degree > chart.dim:
            raise DegreeError(f"degree {degree} exceeds the dimension {chart.dim}")
        self.chart = chart
        self.degree = degree
        store = {}
        for idx, val in (comps or {}).items():
            idx = tuple(chart.index(i) if isinstance(i, str) else i for i in idx)
            if len(idx) != degree or any(not 0 <= i < chart.dim for i in idx):
                raise GeometryError(f"bad component index {idx} for degree {degree}")
            s = _perm_sign(idx)
            if s == 0:
                continue
            key = tuple(sorted(idx))
            store[key] = store.get(key, ZERO) + s * simplify(as_expr(val))
        self.comps = {k: v for k, v in sorted(store.items()) if not v.is_const(0)}

    @classmethod
    def zero(cls, chart, degree):
        return cls(chart, degree, {})

    def __getitem__(self, idx):
        if not isinstance(idx, tuple):
            idx = (idx,)
        s = _perm_sign(idx)
        if s == 0:
            return ZERO
        v = self.comps.get(tuple(sorted(idx)), ZERO)
        return v if s == 1 else -v

    def index_tuples(self):
        return list(itertools.combinations(range(self.chart.dim), self.degree))

    def _other(self, other):
        if type(other) is not type(self) or other.degree != self.degree:
            return NotImplemented
        _check_chart(self, other)
        return other

    def __add__(self, other):
        if self._other(other) is NotImplemented:
            return NotImplemented
        keys = set(self.comps) | set(other.comps)
        return type(self)(self.chart, self.degree,
                          {k: self[k] + other[k] for k in sorted(keys)})

    def __sub__(self, other):
        if self._other(other) is NotImplemented:
            return NotImplemented
        keys = set(self.comps) | set(other.comps)
        return type(self)(self.chart, self.degree,
                          {k: self[k] - other[k] for k in sorted(keys)})

    def __neg__(self):
        return type(self)(self.chart, self.degree, {k: -v for k, v in self.comps.items()})

    def __mul__(self, f):
        if isinstance(f, (_Vectorlike, Alternating)):
            return NotImplemented
        f = as_expr(f)
        return type(self)(self.chart, self.degree, {k: f * v for k, v in self.comps.items()})

    __rmul__ = __mul__

    def is_zero(self):
        return not self.comps

    def components(self):
        """All stored-index components, zeros included, in canonical order."""
        return [self[k] for k in self.index_tuples()]

    def map(self, fn):
        return type(self)(self.chart, self.degree, {k: fn(v) for k, v in self.comps.items()})

    def _evaluate(self, args, kind):
        if len(args) != self.degree:
            raise GeometryError(f"degree-{self.degree} tensor needs {self.degree} arguments")
        for a in args:
            if not isinstance(a, kind):
                raise TypeError(f"expected {kind.__name__} arguments")
        _check_chart(self, *args)
        terms = []
        perms = list(itertools.permutations(range(self.degree)))
        signs = [_perm_sign(p) for p in perms]
        for idx, val in self.comps.items():
            acc = []
            for perm, s in zip(perms, signs):
                prod = [as_expr(s)]
                for k, a in enumerate(args):
                    prod.append(a.comps[idx[perm[k]]])
                acc.append(n_mul(prod))
            terms.append(n_mul([val, n_add(acc)]))
        return n_add(terms)

    def display(self):
        sep = "^"
        parts = []
        for idx, v in self.comps.items():
            basis = sep.join(self._basis_name(i) for i in idx)
            parts.append(f"({self.chart.fmt(v)})*{basis}" if idx else self.chart.fmt(v))
        return " + ".join(parts) or "0"

    def __repr__(self):
        return self.display()


class Multivector(Alternating):
    """Multivector field; ``P(a, b, ...)`` evaluates on 1-forms."""

    family = "multivector"
    __slots__ = ()

    def _basis_name(self, i):
        return f"d/d{self.chart.names[i]}"

    def __call__(self, *forms):
        return self._evaluate(forms, OneForm)


class Form(Alternating):
    """Differential form; ``w(X, Y, ...)`` evaluates on vector fields."""

    family = "form"
    __slots__ = ()

    def _basis_name(self, i):
        return f"d{self.chart.names[i]}"

    def __call__(self, *vectors):
        return self._evaluate(vectors, VectorField)


def as_alternating(obj):
    """View scalars, vector fields and 1-forms as degree-0/1 alternating tensors."""
    if isinstance(obj, Alternating):
        return obj
    if isinstance(obj, VectorField):
        return Multivector(obj.chart, 1, {(i,): c for i, c in enumerate(obj.comps)})
    if isinstance(obj, OneForm):
        return Form(obj.chart, 1, {(i,): c for i, c in enumerate(obj.comps)})
    raise TypeError(f"cannot view {type(obj).__name__} as an alternating tensor")


def lower_degree(t):
    """Return degree-1 alternating tensors as VectorField/OneForm, and degree 0 as Expr."""
    if not isinstance(t, Alternating):
        return t
    if t.degree == 0:
        return t[()]
    if t.degree == 1:
        cls = VectorField if isinstance(t, Multivector) else OneForm
        return cls(t.chart, [t[(i,)] for i in range(t.chart.dim)])
    return t


def bivector(chart, comps):
    return Multivector(chart, 2, comps)


def two_form(chart, comps):
    return Form(chart, 2, comps)


class MetricField:
    """Symmetric (pseudo-)metric ``g_ij``."""

    __slots__ = ("chart", "comps", "signature")

    def __init__(self, chart, comps, signature="riemannian"):
        n = chart.dim
        rows = [_exprs(r, n) for r in comps]
        if len(rows) != n:
            raise GeometryError(f"metric needs a {n}x{n} matrix")
        for i in range(n):
            for j in range(i + 1, n):
                if rows[i][j] is not rows[j][i]:
                    d = simplify(rows[i][j] - rows[j][i])
                    if not d.is_const(0):
                        raise GeometryError(f"metric is not symmetric in ({i}, {j})")
        if signature not in ("riemannian", "pseudo"):
            raise GeometryError(f"unknown signature tag {signature!r}")
        self.chart = chart
        self.comps = tuple(rows)
        self.signature = signature
        if determinant(self.comps).is_const(0):
            raise SingularMatrixError("metric determinant is identically zero")

    @classmethod
    def from_dict(cls, chart, entries, signature="riemannian"):
        n = chart.dim
        m = [[ZERO] * n for _ in range(n)]
        for (i, j), v in entries.items():
            i = chart.index(i) if isinstance(i, str) else i
            j = chart.index(j) if isinstance(j, str) else j
            m[i][j] = m[j][i] = simplify(as_expr(v))
        return cls(chart, m, signature)

    @classmethod
    def euclidean(cls, chart):
        return cls(chart, [[ONE if i == j else ZERO for j in range(chart.dim)]
                           for i in range(chart.dim)])

    def __getitem__(self, ij):
        i, j = ij
        return self.comps[i][j]

    def __call__(self, X, Y):
        _check_chart(self, X, Y)
        n = self.chart.dim
        return _lin((self.comps[i][j], n_mul([X.comps[i], Y.comps[j]]))
                    for i in range(n) for j in range(n)
                    if not self.comps[i][j].is_const(0))

    def matrix(self):
        return self.comps

    def components(self):
        n = self.chart.dim
        return [self.comps[i][j] for i in range(n) for j in range(i, n)]


class EndoField:
    """Field of endomorphisms of the tangent (or, if ``covariant``, cotangent) bundle."""

    __slots__ = ("chart", "comps", "covariant")

    def __init__(self, chart, comps, covariant=False):
        n = chart.dim
        rows = [_exprs(r, n) for r in comps]
        if len(rows) != n:
            raise GeometryError(f"endomorphism needs a {n}x{n} matrix")
        self.chart = chart
        self.comps = tuple(rows)
        self.covariant = covariant

    @classmethod
    def from_dict(cls, chart, entries, covariant=False):
        n = chart.dim
        m = [[ZERO] * n for _ in range(n)]
        for (i, j), v in entries.items():
            i = chart.index(i) if isinstance(i, str) else i
            j = chart.index(j) if isinstance(j, str) else j
            m[i][j] = simplify(as_expr(v))
        return cls(chart, m, covariant)

    @classmethod
    def identity(cls, chart, covariant=False):
        n = chart.dim
        return cls(chart, [[ONE if i == j else ZERO for j in range(n)] for i in range(n)],
                   covariant)

    def __getitem__(self, ij):
        i, j = ij
        return self.comps[i][j]

    def __call__(self, arg):
        want = OneForm if self.covariant else VectorField
        if not isinstance(arg, want):
            raise TypeError(f"this endomorphism acts on {want.__name__}")
        _check_chart(self, arg)
        return want(self.chart, mat_vec(self.comps, arg.comps))

    def compose(self, other):
        if other.covariant != self.covariant:
            raise GeometryError("cannot compose endomorphisms of different bundles")
        return EndoField(self.chart, mat_mul(self.comps, other.comps), self.covariant)

    def __add__(self, other):
        return EndoField(self.chart, [[a + b for a, b in zip(r, s)]
                                      for r, s in zip(self.comps, other.comps)],
                         self.covariant)

    def __sub__(self, other):
        return EndoField(self.chart, [[a - b for a, b in zip(r, s)]
                                      for r, s in zip(self.comps, other.comps)],
                         self.covariant)

    def __mul__(self, f):
        f = as_expr(f)
        return EndoField(self.chart, [[f * a for a in r] for r in self.comps], self.covariant)

    __rmul__ = __mul__

    def components(self):
        return [c for r in self.comps for c in r]


# -- multilinear algebra ------------------------------------------------------

def pair(alpha, X) -> Expr:
    """``alpha(X) = alpha_i X^i``."""
    if not isinstance(alpha, OneForm) or not isinstance(X, VectorField):
        raise TypeError("pair expects (OneForm, VectorField)")
    _check_chart(alpha, X)
    return _lin((a, x) for a, x in zip(alpha.comps, X.comps)
                if not a.is_const(0) and not x.is_const(0))


def evaluate_form(omega, *vectors) -> Expr:
    if isinstance(omega, OneForm):
        (X,) = vectors
        return pair(omega, X)
    if isinstance(omega, Expr):
        if vectors:
            raise GeometryError("a 0-form takes no arguments")
        return omega
    return omega(*vectors)


def evaluate_multivector(P, *forms) -> Expr:
    if isinstance(P, VectorField):
        (a,) = forms
        return pair(a, P)
    return P(*forms)


def wedge(a, b):
    """Exterior product with the determinant (shuffle) convention."""
    A, B = as_alternating(a), as_alternating(b)
    if A.family != B.family:
        raise TypeError("cannot wedge a multivector with a form")
    _check_chart(A, B)
    p, q = A.degree, B.degree
    if p + q > MAX_DEGREE:
        raise DegreeError(f"degree {p + q} exceeds the supported maximum {MAX_DEGREE}")
    if p + q > A.chart.dim:
        raise DegreeError(f"degree {p + q} exceeds the dimension {A.chart.dim}")
    cls = type(A)
    out = {}
    for K in itertools.combinations(range(A.chart.dim), p + q):
        terms = []
        for pos in itertools.combinations(range(p + q), p):
            I = tuple(K[k] for k in pos)
            J = tuple(K[k] for k in range(p + q) if k not in pos)
            a_I, b_J = A.comps.get(I), B.comps.get(J)
            if a_I is None or b_J is None:
                continue
            s = _perm_sign(I + J)
            terms.append(n_mul([as_expr(s), a_I, b_J]))
        if terms:
            out[K] = n_add(terms)
    return lower_degree(cls(A.chart, p + q, out))


def interior(X, omega):
    """``i_X w = w(X, ., ...)``."""
    if not isinstance(X, VectorField):
        raise TypeError("interior product needs a VectorField")
    W = as_alternating(omega) if isinstance(omega, OneForm) else omega
    if isinstance(W, Expr) or W.degree == 0:
        raise DegreeError("interior product of a 0-form")
    if not isinstance(W, Form):
        raise TypeError("interior product needs a differential form")
    _check_chart(X, W)
    p = W.degree
    n = W.chart.dim
    out = {}
    for J in itertools.combinations(range(n), p - 1):
        terms = [n_mul([X.comps[i], W[(i,) + J]]) for i in range(n)
                 if i not in J and not X.comps[i].is_const(0)]
        if terms:
            out[J] = n_add(terms)
    return lower_degree(Form(W.chart, p - 1, out))


# -- matrices of expressions ---------------------------------------------------

def _matrix(M):
    return [[simplify(c) for c in row] for row in M]


def mat_vec(M, v):
    M, v = _matrix(M), [simplify(x) for x in v]
    return tuple(_lin((m, x) for m, x in zip(row, v) if not m.is_const(0)) for row in M)


def mat_mul(A, B):
    A, B = _matrix(A), _matrix(B)
    n, k, m = len(A), len(B), len(B[0])
    return tuple(tuple(_lin((A[i][l], B[l][j]) for l in range(k)
                            if not A[i][l].is_const(0) and not B[l][j].is_const(0))
                       for j in range(m)) for i in range(n))


def transpose(M):
    return tuple(zip(*M))


def _minor_dets(M):
    """Determinants of square submatrices, memoized on (rows, cols) bitmasks."""
    n = len(M)
    memo = {}

    def det(rows, cols):
        key = (rows, cols)
        if key in memo:
            return memo[key]
        ri = [i for i in range(n) if rows >> i & 1]
        ci = [j for j in range(n) if cols >> j & 1]
        if not ri:
            r = ONE
        elif len(ri) == 1:
            r = M[ri[0]][ci[0]]
        else:
            i0 = ri[0]
            terms = []
            for k, j in enumerate(ci):
                a = M[i0][j]
                if a.is_const(0):
                    continue
                sub = det(rows & ~(1 << i0), cols & ~(1 << j))
                if sub.is_const(0):
                    continue
                terms.append(n_mul([as_expr(-1 if k % 2 else 1), a, sub]))
            r = expand(n_add(terms)) if terms else ZERO
        memo[key] = r
        return r

    return det


def determinant(M) -> Expr:
    M = _matrix(M)
    n = len(M)
    if any(len(r) != n for r in M):
        raise GeometryError("determinant of a non-square matrix")
    full = (1 << n) - 1
    return _minor_dets(M)(full, full)


def sym_inverse(M, chart=None, n_check=20, seed=12345):
    """Adjugate inverse of a matrix of expressions.

    Raises :class:`SingularMatrixError` when the determinant is identically zero,
    either literally or numerically at ``n_check`` points sampled on ``chart``.
    """
    M = _matrix(M)
    n = len(M)
    if any(len(r) != n for r in M):
        raise GeometryError("inverse of a non-square matrix")
    det = _minor_dets(M)
    full = (1 << n) - 1
    D = det(full, full)
    if D.is_const(0):
        raise SingularMatrixError("determinant is identically zero")
    if chart is not None and not D.is_const():
        pts = chart.sample(n_check, seed)
        try:
            vals = evaluate_many([D], pts)[0]
        except ArithmeticError:
            vals = None
        if vals is not None and np.all(np.abs(vals) < 1e-12):
            raise SingularMatrixError("determinant vanishes at every sample point")
    inv_det = D ** -1
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            # (M^-1)[i][j] = cofactor(j, i) / det
            c = det(full & ~(1 << j), full & ~(1 << i))
            sign = -1 if (i + j) % 2 else 1
            row.append(n_mul([as_expr(sign), c, inv_det]))
        out.append(tuple(row))
    return tuple(out)


def identity_matrix(n):
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


# -- random inputs for property checks ------------------------------------------

def random_polynomial(chart, rng, degree=2, n_terms=3, coeff_range=3):
    """Sparse polynomial with small nonzero integer coefficients."""
    monos = [m for d in range(degree + 1)
             for m in itertools.combinations_with_replacement(range(chart.dim), d)]
    picks = rng.choice(len(monos), size=min(n_terms, len(monos)), replace=False)
    terms = []
    for k in sorted(int(p) for p in picks):
        c = int(rng.integers(1, coeff_range + 1)) * (1 if rng.random() < 0.5 else -1)
        f = as_expr(Fraction(c))
        for i in monos[k]:
            f = f * coord(i)
        terms.append(f)
    return n_add(terms)


def random_one_form(chart, rng, **kw):
    return OneForm(chart, [random_polynomial(chart, rng, **kw) for _ in range(chart.dim)])


def random_vector_field(chart, rng, **kw):
    return VectorField(chart, [random_polynomial(chart, rng, **kw) for _ in range(chart.dim)])


def random_bivector(chart, rng, **kw):
    return Multivector(chart, 2, {ij: random_polynomial(chart, rng, **kw)
                                  for ij in itertools.combinations(range(chart.dim), 2)})


def components(obj):
    """Flat list of component expressions of any field-like object."""
    if isinstance(obj, Expr):
        return [obj]
    if isinstance(obj, (list, tuple)):
        return [c for o in obj for c in components(o)]
    return obj.components()


__all__ = [
    "Alternating", "Chart", "ChartMismatch", "DegreeError", "EndoField", "Form",
    "GeometryError", "MAX_DEGREE", "MetricField", "Multivector", "OneForm",
    "SamplingError", "ScalarField", "SingularMatrixError", "VectorField",
    "as_alternating", "bivector", "components", "determinant", "evaluate_form",
    "evaluate_multivector", "identity_matrix", "interior", "lower_degree", "mat_mul",
    "mat_vec", "pair", "random_bivector", "random_one_form", "random_polynomial",
    "random_vector_field", "sym_inverse", "transpose", "two_form", "wedge",
]
