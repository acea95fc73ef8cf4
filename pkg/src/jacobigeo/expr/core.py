"""Expression nodes, normalizing constructors, simplification and differentiation.

Every node is interned: two structurally identical nodes built the same way are
the same Python object, so identity comparison is structural comparison and
expression DAGs share subtrees for free.

Two families of nodes coexist:

* *raw* nodes, built by the module level constructors (:func:`add`, :func:`neg`,
  :func:`div`, ...) and kept exactly as written;
* *normal* nodes, produced by :func:`simplify` and by the arithmetic operators on
  :class:`Expr`.  Normal form only uses ``const``, ``coord``, n-ary ``add`` and
  ``mul``, integer ``pow`` and the four elementary functions; sums collect like
  terms and products collect integer powers of the same base.
"""
from __future__ import annotations

import hashlib
import math
import weakref
from fractions import Fraction
from numbers import Number

KINDS = ("const", "coord", "neg", "add", "sub", "mul", "div", "pow",
         "exp", "ln", "sin", "cos")
FUNCTIONS = ("exp", "ln", "sin", "cos")
_RANK = {k: i for i, k in enumerate(
    ("const", "coord", "add", "mul", "pow", "exp", "ln", "sin", "cos",
     "neg", "sub", "div"))}


class ExprError(ValueError):
    """Malformed expression (bad construction, literal division by zero, ...)."""


class EvaluationSingularity(ArithmeticError):
    """Raised when evaluation hits a zero denominator or a non-positive logarithm."""

    def __init__(self, subexpr, point=None, reason="singular value"):
        self.subexpr = subexpr
        self.point = point
        self.reason = reason
        where = "" if point is None else f" at point {tuple(float(v) for v in point)}"
        super().__init__(f"{reason} in subexpression {subexpr}{where}")


_interned: "weakref.WeakValueDictionary[tuple, Expr]" = weakref.WeakValueDictionary()


def _value_key(value):
    if value is None:
        return None
    if isinstance(value, Fraction):
        return ("q", value.numerator, value.denominator)
    if isinstance(value, float):
        return ("f", value)
    return ("i", value)


class Expr:
    """Immutable, interned scalar expression node.

    ``kind`` is one of :data:`KINDS`, ``args`` the child nodes and ``value`` the
    payload (the number of a constant, the index of a coordinate, the integer
    exponent of a power).
    """

    __slots__ = ("kind", "args", "value", "normal", "digest", "key", "mask",
                 "_deriv", "_simplified", "_str", "__weakref__")

    def __new__(cls, kind, args=(), value=None, normal=False):
        ikey = (kind, _value_key(value), args, normal)
        node = _interned.get(ikey)
        if node is not None:
            return node
        if kind not in KINDS:
            raise ExprError(f"unknown node kind {kind!r}")
        node = object.__new__(cls)
        node.kind = kind
        node.args = args
        node.value = value
        node.normal = normal
        h = hashlib.blake2b(digest_size=12)
        h.update(kind.encode())
        h.update(repr(_value_key(value)).encode())
        for a in args:
            h.update(a.digest)
        node.digest = h.digest()
        vk = value if kind == "coord" else 0
        node.key = (_RANK[kind], vk, node.digest)
        mask = (1 << value) if kind == "coord" else 0
        for a in args:
            mask |= a.mask
        node.mask = mask
        node._deriv = {}
        node._simplified = node if normal else None
        node._str = None
        _interned[ikey] = node
        return node

    # -- structural helpers -------------------------------------------------
    def is_const(self, v=None):
        if self.kind != "const":
            return False
        return v is None or self.value == v

    def depends_on(self, i):
        return bool(self.mask >> i & 1)

    def structure(self):
        """Nested tuple view, convenient for structural assertions."""
        if self.kind == "const":
            return ("const", self.value)
        if self.kind == "coord":
            return ("coord", self.value)
        if self.kind == "pow":
            return ("pow", self.args[0].structure(), self.value)
        return (self.kind,) + tuple(a.structure() for a in self.args)

    def nodes(self):
        """All distinct nodes of the DAG in post-order."""
        return list(_postorder([self]))

    def size(self):
        return len(self.nodes())

    def __repr__(self):
        return f"Expr({self})"

    def __str__(self):
        if self._str is None:
            from .printing import to_string
            self._str = to_string(self)
        return self._str

    def __reduce__(self):
        raise TypeError("Expr objects are interned and not picklable; use str()")

    # -- arithmetic (always normalizing) ------------------------------------
    # non-scalar operands (tensor fields) get NotImplemented so that their
    # reflected operators run
    def __add__(self, other):
        if not _scalar_like(other):
            return NotImplemented
        return n_add([simplify(self), simplify(other)])

    def __radd__(self, other):
        if not _scalar_like(other):
            return NotImplemented
        return n_add([simplify(other), simplify(self)])

    def __sub__(self, other):
        if not _scalar_like(other):
            return NotImplemented
        return n_add([simplify(self), n_neg(simplify(other))])

    def __rsub__(self, other):
        if not _scalar_like(other):
            return NotImplemented
        return n_add([simplify(other), n_neg(simplify(self))])

    def __mul__(self, other):
        if not _scalar_like(other):
            return NotImplemented
        return n_mul([simplify(self), simplify(other)])

    def __rmul__(self, other):
        if not _scalar_like(other):
            return NotImplemented
        return n_mul([simplify(other), simplify(self)])

    def __truediv__(self, other):
        if not _scalar_like(other):
            return NotImplemented
        return n_div(simplify(self), simplify(other))

    def __rtruediv__(self, other):
        if not _scalar_like(other):
            return NotImplemented
        return n_div(simplify(other), simplify(self))

    def __neg__(self):
        return n_neg(simplify(self))

    def __pos__(self):
        return simplify(self)

    def __pow__(self, n):
        if isinstance(n, Expr):
            if n.kind == "const" and _is_integral(n.value):
                n = int(n.value)
            else:
                raise ExprError("only integer exponents are supported")
        if not _is_integral(n):
            raise ExprError(f"only integer exponents are supported, got {n!r}")
        return n_pow(simplify(self), int(n))

    def __bool__(self):
        raise TypeError("truth value of an Expr is ambiguous; use is_const()")


def _is_integral(v):
    if isinstance(v, bool):
        return False
    if isinstance(v, int):
        return True
    if isinstance(v, Fraction):
        return v.denominator == 1
    if isinstance(v, float):
        return v.is_integer()
    return False


def _postorder(roots):
    seen = set()
    out = []
    for root in roots:
        if id(root) in seen:
            continue
        stack = [(root, False)]
        while stack:
            node, done = stack.pop()
            if done:
                out.append(node)
                continue
            if id(node) in seen:
                continue
            seen.add(id(node))
            stack.append((node, True))
            for a in reversed(node.args):
                if id(a) not in seen:
                    stack.append((a, False))
    return out


def _number(v):
    if isinstance(v, bool):
        raise ExprError("booleans are not numbers")
    if isinstance(v, int):
        return v
    if isinstance(v, Fraction):
        # integral rationals are stored as ints so that exact arithmetic stays cheap
        return v.numerator if v.denominator == 1 else v
    if isinstance(v, float):
        if not math.isfinite(v):
            raise ExprError(f"non-finite constant {v!r}")
        return v
    if isinstance(v, Number):
        return _number(float(v))
    raise ExprError(f"cannot turn {v!r} into a constant")


def _scalar_like(v):
    return isinstance(v, (Expr, Number)) and not isinstance(v, bool)


def const(v) -> Expr:
    """Constant node; ints and Fractions stay exact, floats stay floats."""
    return Expr("const", (), _number(v), True)


ZERO = const(0)
ONE = const(1)
MINUS_ONE = const(-1)


def coord(i: int) -> Expr:
    if not isinstance(i, int) or i < 0:
        raise ExprError(f"coordinate index must be a non-negative int, got {i!r}")
    return Expr("coord", (), i, True)


def as_expr(v) -> Expr:
    if isinstance(v, Expr):
        return v
    return const(v)


# -- raw constructors ---------------------------------------------------------

def neg(a) -> Expr:
    return Expr("neg", (as_expr(a),))


def add(*terms) -> Expr:
    if len(terms) < 2:
        raise ExprError("add needs at least two terms")
    return Expr("add", tuple(as_expr(t) for t in terms))


def sub(a, b) -> Expr:
    return Expr("sub", (as_expr(a), as_expr(b)))


def mul(*factors) -> Expr:
    if len(factors) < 2:
        raise ExprError("mul needs at least two factors")
    return Expr("mul", tuple(as_expr(f) for f in factors))


def div(a, b) -> Expr:
    b = as_expr(b)
    if b.is_const(0):
        raise ExprError("division by the literal constant zero")
    return Expr("div", (as_expr(a), b))


def power(base, n: int) -> Expr:
    if not _is_integral(n):
        raise ExprError(f"only integer exponents are supported, got {n!r}")
    base = as_expr(base)
    if int(n) < 0 and base.is_const(0):
        raise ExprError("negative power of the literal constant zero")
    return Expr("pow", (base,), int(n))


def exp(a) -> Expr:
    return Expr("exp", (as_expr(a),))


def ln(a) -> Expr:
    return Expr("ln", (as_expr(a),))


def sin(a) -> Expr:
    return Expr("sin", (as_expr(a),))


def cos(a) -> Expr:
    return Expr("cos", (as_expr(a),))


# -- normalizing constructors -------------------------------------------------

def _split_coeff(t):
    if t.kind == "mul" and t.args[0].kind == "const":
        rest = t.args[1:]
        if len(rest) == 1:
            return t.args[0].value, rest[0]
        return t.args[0].value, Expr("mul", rest, None, True)
    return 1, t


def _with_coeff(c, rest):
    if c == 1:
        return rest
    if rest.kind == "mul":
        return Expr("mul", (const(c),) + rest.args, None, True)
    return Expr("mul", (const(c), rest), None, True)


_MEMO_LIMIT = 400_000
_add_memo: dict = {}
_mul_memo: dict = {}


def _memoized(memo, build):
    def wrapper(args):
        key = tuple(args)
        r = memo.get(key)
        if r is None:
            if len(memo) > _MEMO_LIMIT:
                memo.clear()
            r = memo[key] = build(key)
        return r
    wrapper.__doc__ = build.__doc__
    wrapper.__name__ = build.__name__.lstrip("_")
    return wrapper


def _n_add(terms) -> Expr:
    """Normalized sum of already-normal terms."""
    total = 0
    collected: dict = {}
    stack = list(reversed(terms))
    while stack:
        t = stack.pop()
        if t.kind == "add":
            stack.extend(reversed(t.args))
            continue
        if t.kind == "const":
            total = total + t.value
            continue
        c, rest = _split_coeff(t)
        prev = collected.get(rest)
        collected[rest] = c if prev is None else prev + c
    items = [(r, c) for r, c in collected.items() if c != 0]
    if not items:
        return const(total)
    items.sort(key=lambda rc: rc[0].key)
    out = [_with_coeff(c, r) for r, c in items]
    if total != 0:
        out.append(const(total))
    if len(out) == 1:
        return out[0]
    return Expr("add", tuple(out), None, True)


n_add = _memoized(_add_memo, _n_add)


def _n_mul(factors) -> Expr:
    """Normalized product of already-normal factors."""
    coeff = 1
    powers: dict = {}
    exponents = []
    stack = list(reversed(factors))
    while stack:
        f = stack.pop()
        if f.kind == "mul":
            stack.extend(reversed(f.args))
            continue
        if f.kind == "const":
            coeff = coeff * f.value
            continue
        if f.kind == "pow":
            base, n = f.args[0], f.value
        else:
            base, n = f, 1
        if base.kind == "exp":
            # exp(a)^n exp(b)^m -> exp(n a + m b)
            exponents.append(base.args[0] if n == 1 else n_mul([const(n), base.args[0]]))
            continue
        powers[base] = powers.get(base, 0) + n
    if coeff == 0:
        return ZERO
    if exponents:
        e = n_func("exp", n_add(exponents))
        if e.kind == "exp":
            powers[e] = 1
    items = [(b, n) for b, n in powers.items() if n != 0]
    if not items:
        return const(coeff)
    items.sort(key=lambda bn: bn[0].key)
    out = [b if n == 1 else Expr("pow", (b,), n, True) for b, n in items]
    if len(out) == 1:
        f = out[0]
        if coeff == 1:
            return f
        if f.kind == "add":
            # distribute a bare numeric coefficient so that like terms can meet
            return n_add([_scale(t, coeff) for t in f.args])
        return Expr("mul", (const(coeff), f), None, True)
    if coeff != 1:
        out.insert(0, const(coeff))
    return Expr("mul", tuple(out), None, True)


n_mul = _memoized(_mul_memo, _n_mul)


def _scale(t, c):
    if t.kind == "const":
        return const(t.value * c)
    c0, rest = _split_coeff(t)
    return _with_coeff(c0 * c, rest)


def n_pow(base, n: int) -> Expr:
    if n == 0:
        return ONE
    if n == 1:
        return base
    if base.kind == "const":
        v = base.value
        if v == 0 and n < 0:
            raise ExprError("negative power of the literal constant zero")
        if isinstance(v, (int, Fraction)):
            return const(Fraction(v) ** n)
        return const(float(v) ** n)
    if base.kind == "pow":
        return n_pow(base.args[0], base.value * n)
    if base.kind == "mul":
        return n_mul([n_pow(f, n) for f in base.args])
    if base.kind == "exp":
        return n_mul([base] * n) if n > 0 else n_mul([n_func("exp", n_neg(base.args[0]))] * -n)
    return Expr("pow", (base,), n, True)


def n_neg(a) -> Expr:
    return n_mul([MINUS_ONE, a])


def n_div(a, b) -> Expr:
    if b.is_const(0):
        raise ExprError("division by the literal constant zero")
    return n_mul([simplify(a), n_pow(simplify(b), -1)])


_FOLD = {
    ("exp", 0): 1,
    ("ln", 1): 0,
    ("sin", 0): 0,
    ("cos", 0): 1,
}


def n_func(kind, a) -> Expr:
    if a.kind == "const" and isinstance(a.value, (int, Fraction)):
        folded = _FOLD.get((kind, a.value))
        if folded is not None:
            return const(folded)
    if kind == "ln" and a.kind == "const" and a.value <= 0:
        raise ExprError(f"logarithm of the non-positive constant {a.value}")
    return Expr(kind, (a,), None, True)


# -- simplify -----------------------------------------------------------------

def simplify(e) -> Expr:
    """Return the normal form of ``e``.

    The rewrite is value preserving: annihilation by zero, removal of additive
    and multiplicative identities, constant folding, flattening, collection of
    like terms and of integer powers.  No exp/log/trig identities are used.
    """
    e = as_expr(e)
    if e._simplified is not None:
        return e._simplified
    for node in _postorder([e]):
        if node._simplified is not None:
            continue
        a = [c._simplified for c in node.args]
        k = node.kind
        if k == "neg":
            r = n_neg(a[0])
        elif k == "add":
            r = n_add(a)
        elif k == "sub":
            r = n_add([a[0], n_neg(a[1])])
        elif k == "mul":
            r = n_mul(a)
        elif k == "div":
            r = n_div(a[0], a[1])
        elif k == "pow":
            r = n_pow(a[0], node.value)
        elif k in FUNCTIONS:
            r = n_func(k, a[0])
        else:  # const/coord are always normal
            r = node
        node._simplified = r
    return e._simplified


def expand(e) -> Expr:
    """Distribute products and non-negative integer powers over sums."""
    e = simplify(e)
    memo: dict = {}
    for node in _postorder([e]):
        k = node.kind
        a = [memo[id(c)] for c in node.args]
        if k == "add":
            r = n_add(a)
        elif k == "mul":
            r = ONE
            for f in a:
                r = _expand_product(r, f)
        elif k == "pow":
            if node.value > 0 and a[0].kind == "add":
                r = ONE
                for _ in range(node.value):
                    r = _expand_product(r, a[0])
            else:
                r = n_pow(a[0], node.value)
        elif k in FUNCTIONS:
            r = n_func(k, a[0])
        else:
            r = node
        memo[id(node)] = r
    return memo[id(e)]


def _expand_product(a, b):
    ta = a.args if a.kind == "add" else (a,)
    tb = b.args if b.kind == "add" else (b,)
    return n_add([n_mul([x, y]) for x in ta for y in tb])


# -- differentiation ----------------------------------------------------------

_derivative_log = None


def diff(e, i: int) -> Expr:
    """Exact partial derivative of ``e`` with respect to coordinate ``i``."""
    e = simplify(e)
    if not isinstance(i, int) or i < 0:
        raise ExprError(f"bad coordinate index {i!r}")
    if _derivative_log is not None:
        _derivative_log.append((e, i))
    return _diff(e, i)


def _diff(e, i):
    if not (e.mask >> i & 1):
        return ZERO
    cached = e._deriv.get(i)
    if cached is not None:
        return cached
    k = e.kind
    if k == "coord":
        r = ONE
    elif k == "add":
        r = n_add([_diff(t, i) for t in e.args])
    elif k == "mul":
        terms = []
        fs = e.args
        for j, f in enumerate(fs):
            df = _diff(f, i)
            if df.is_const(0):
                continue
            terms.append(n_mul(list(fs[:j]) + [df] + list(fs[j + 1:])))
        r = n_add(terms)
    elif k == "pow":
        b, n = e.args[0], e.value
        r = n_mul([const(n), n_pow(b, n - 1), _diff(b, i)])
    elif k == "exp":
        r = n_mul([e, _diff(e.args[0], i)])
    elif k == "ln":
        r = n_mul([_diff(e.args[0], i), n_pow(e.args[0], -1)])
    elif k == "sin":
        r = n_mul([n_func("cos", e.args[0]), _diff(e.args[0], i)])
    elif k == "cos":
        r = n_mul([MINUS_ONE, n_func("sin", e.args[0]), _diff(e.args[0], i)])
    else:  # pragma: no cover - normal form never holds other kinds
        raise ExprError(f"cannot differentiate node kind {k}")
    e._deriv[i] = r
    return r


class record_derivatives:
    """Context manager collecting every ``(expr, index)`` passed to :func:`diff`.

    Only top-level requests are logged (internal recursion is not), which is what
    the finite-difference audit needs.
    """

    def __enter__(self):
        global _derivative_log
        self._prev = _derivative_log
        self.calls = []
        _derivative_log = self.calls
        return self

    def __exit__(self, *exc):
        global _derivative_log
        _derivative_log = self._prev
        return False

    def unique(self):
        seen = {}
        for e, i in self.calls:
            seen.setdefault((id(e), i), (e, i))
        return list(seen.values())


# -- pointwise evaluation -----------------------------------------------------

def evaluate(e, point) -> float:
    """IEEE double evaluation at a single point (tree walk, used for diagnostics)."""
    e = as_expr(e)
    pt = [float(v) for v in point]
    vals: dict = {}
    for node in _postorder([e]):
        k = node.kind
        a = [vals[id(c)] for c in node.args]
        if k == "const":
            v = float(node.value)
        elif k == "coord":
            if node.value >= len(pt):
                raise ExprError(f"coordinate {node.value} outside a {len(pt)}-point")
            v = pt[node.value]
        elif k == "neg":
            v = -a[0]
        elif k == "add":
            v = a[0]
            for x in a[1:]:
                v += x
        elif k == "sub":
            v = a[0] - a[1]
        elif k == "mul":
            v = 1.0
            for x in a:
                v *= x
        elif k == "div":
            if a[1] == 0.0:
                raise EvaluationSingularity(node, pt, "division by zero")
            v = a[0] / a[1]
        elif k == "pow":
            if node.value < 0 and a[0] == 0.0:
                raise EvaluationSingularity(node, pt, "division by zero")
            v = a[0] ** node.value
        elif k == "exp":
            v = math.exp(a[0])
        elif k == "ln":
            if a[0] <= 0.0:
                raise EvaluationSingularity(node, pt, "logarithm of a non-positive value")
            v = math.log(a[0])
        elif k == "sin":
            v = math.sin(a[0])
        else:
            v = math.cos(a[0])
        vals[id(node)] = v
    return vals[id(e)]


def free_coords(e) -> list:
    m = as_expr(e).mask
    return [i for i in range(m.bit_length()) if m >> i & 1]
