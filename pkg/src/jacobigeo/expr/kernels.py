"""Batch evaluation of expression DAGs over many sample points.

An expression list is flattened into a post-order instruction tape (opcode,
CSR child lists, integer and float payloads).  Two interchangeable kernels run
the tape:

* ``_run_numba`` - a ``numba.njit`` loop over points and instructions;
* ``_run_numpy`` - a pure numpy loop over instructions, vectorized over points.

The numba kernel is used when numba imports and ``JACOBIGEO_NUMBA`` is not set
to ``0``/``false``/``off``.  Both return the same status triple on a singular
value so that the caller can report the offending subexpression.
"""
from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .core import EvaluationSingularity, Expr, ExprError, _postorder, as_expr

OP_CONST, OP_COORD, OP_NEG, OP_ADD, OP_SUB, OP_MUL, OP_DIV, OP_POW = range(8)
OP_EXP, OP_LN, OP_SIN, OP_COS = range(8, 12)
_OPCODE = {"const": OP_CONST, "coord": OP_COORD, "neg": OP_NEG, "add": OP_ADD,
           "sub": OP_SUB, "mul": OP_MUL, "div": OP_DIV, "pow": OP_POW,
           "exp": OP_EXP, "ln": OP_LN, "sin": OP_SIN, "cos": OP_COS}

ERR_NONE, ERR_DIV, ERR_LN = 0, 1, 2
_REASON = {ERR_DIV: "division by zero", ERR_LN: "logarithm of a non-positive value"}


def _numba_requested():
    flag = os.environ.get("JACOBIGEO_NUMBA", "1").strip().lower()
    return flag not in ("0", "false", "off", "no")


try:  # pragma: no cover - exercised implicitly depending on the environment
    if not _numba_requested():
        raise ImportError("numba disabled by JACOBIGEO_NUMBA")
    from numba import njit
    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover
    njit = None
    NUMBA_AVAILABLE = False


@dataclass(frozen=True)
class Program:
    """Flattened instruction tape for a list of root expressions."""

    op: np.ndarray
    arg_start: np.ndarray
    arg_count: np.ndarray
    args: np.ndarray
    ival: np.ndarray
    fval: np.ndarray
    roots: np.ndarray
    nodes: tuple

    @property
    def n_nodes(self):
        return len(self.op)

    @property
    def max_coord(self):
        mask = self.op == OP_COORD
        return int(self.ival[mask].max()) if mask.any() else -1


def compile_exprs(exprs) -> Program:
    exprs = [as_expr(e) for e in exprs]
    nodes = _postorder(exprs)
    index = {id(n): k for k, n in enumerate(nodes)}
    n = len(nodes)
    op = np.empty(n, np.int64)
    arg_start = np.empty(n, np.int64)
    arg_count = np.empty(n, np.int64)
    ival = np.zeros(n, np.int64)
    fval = np.zeros(n, np.float64)
    flat = []
    for k, node in enumerate(nodes):
        op[k] = _OPCODE[node.kind]
        arg_start[k] = len(flat)
        arg_count[k] = len(node.args)
        flat.extend(index[id(a)] for a in node.args)
        if node.kind == "const":
            fval[k] = float(node.value)
        elif node.kind in ("coord", "pow"):
            ival[k] = node.value
    return Program(op, arg_start, arg_count, np.asarray(flat, np.int64), ival, fval,
                   np.asarray([index[id(e)] for e in exprs], np.int64), tuple(nodes))


def _run_python_numpy(op, arg_start, arg_count, args, ival, fval, roots, pts):
    npts = pts.shape[0]
    vals = np.empty((len(op), npts))
    with np.errstate(all="ignore"):
        for k in range(len(op)):
            o = op[k]
            s = arg_start[k]
            c = arg_count[k]
            if o == OP_CONST:
                vals[k] = fval[k]
            elif o == OP_COORD:
                vals[k] = pts[:, ival[k]]
            elif o == OP_NEG:
                vals[k] = -vals[args[s]]
            elif o == OP_ADD:
                acc = vals[args[s]].copy()
                for j in range(s + 1, s + c):
                    acc += vals[args[j]]
                vals[k] = acc
            elif o == OP_SUB:
                vals[k] = vals[args[s]] - vals[args[s + 1]]
            elif o == OP_MUL:
                acc = vals[args[s]].copy()
                for j in range(s + 1, s + c):
                    acc *= vals[args[j]]
                vals[k] = acc
            elif o == OP_DIV:
                den = vals[args[s + 1]]
                bad = np.flatnonzero(den == 0.0)
                if bad.size:
                    return None, ERR_DIV, k, int(bad[0])
                vals[k] = vals[args[s]] / den
            elif o == OP_POW:
                base = vals[args[s]]
                n = ival[k]
                if n < 0:
                    bad = np.flatnonzero(base == 0.0)
                    if bad.size:
                        return None, ERR_DIV, k, int(bad[0])
                vals[k] = _ipow(base, n)
            elif o == OP_EXP:
                vals[k] = np.exp(vals[args[s]])
            elif o == OP_LN:
                a = vals[args[s]]
                bad = np.flatnonzero(~(a > 0.0))
                if bad.size:
                    return None, ERR_LN, k, int(bad[0])
                vals[k] = np.log(a)
            elif o == OP_SIN:
                vals[k] = np.sin(vals[args[s]])
            else:
                vals[k] = np.cos(vals[args[s]])
    return vals[roots], ERR_NONE, -1, -1


def _ipow(base, n):
    # repeated squaring, the same arithmetic as the compiled kernel
    if n < 0:
        return 1.0 / _ipow(base, -n)
    result = np.ones_like(base)
    b = base.copy()
    while n:
        if n & 1:
            result = result * b
        n >>= 1
        if n:
            b = b * b
    return result


def _run_scalar(op, arg_start, arg_count, args, ival, fval, roots, pts):
    npts = pts.shape[0]
    nn = op.shape[0]
    out = np.empty((roots.shape[0], npts))
    vals = np.empty(nn)
    for p in range(npts):
        for k in range(nn):
            o = op[k]
            s = arg_start[k]
            c = arg_count[k]
            if o == OP_CONST:
                vals[k] = fval[k]
            elif o == OP_COORD:
                vals[k] = pts[p, ival[k]]
            elif o == OP_NEG:
                vals[k] = -vals[args[s]]
            elif o == OP_ADD:
                acc = vals[args[s]]
                for j in range(s + 1, s + c):
                    acc += vals[args[j]]
                vals[k] = acc
            elif o == OP_SUB:
                vals[k] = vals[args[s]] - vals[args[s + 1]]
            elif o == OP_MUL:
                acc = vals[args[s]]
                for j in range(s + 1, s + c):
                    acc *= vals[args[j]]
                vals[k] = acc
            elif o == OP_DIV:
                den = vals[args[s + 1]]
                if den == 0.0:
                    return out, ERR_DIV, k, p
                vals[k] = vals[args[s]] / den
            elif o == OP_POW:
                base = vals[args[s]]
                n = ival[k]
                neg = n < 0
                if neg:
                    if base == 0.0:
                        return out, ERR_DIV, k, p
                    n = -n
                r = 1.0
                b = base
                while n:
                    if n & 1:
                        r *= b
                    n >>= 1
                    if n:
                        b *= b
                vals[k] = 1.0 / r if neg else r
            elif o == OP_EXP:
                vals[k] = np.exp(vals[args[s]])
            elif o == OP_LN:
                a = vals[args[s]]
                if not a > 0.0:
                    return out, ERR_LN, k, p
                vals[k] = np.log(a)
            elif o == OP_SIN:
                vals[k] = np.sin(vals[args[s]])
            else:
                vals[k] = np.cos(vals[args[s]])
        for r in range(roots.shape[0]):
            out[r, p] = vals[roots[r]]
    return out, ERR_NONE, -1, -1


if NUMBA_AVAILABLE:
    _run_numba = njit(cache=True, nogil=True)(_run_scalar)
else:  # pragma: no cover
    _run_numba = None


def backend() -> str:
    return "numba" if NUMBA_AVAILABLE else "numpy"


def run_program(prog: Program, points, use_numba=None) -> np.ndarray:
    """Evaluate every root of ``prog`` at every point; returns (n_roots, n_points)."""
    pts = np.ascontiguousarray(np.atleast_2d(np.asarray(points, dtype=np.float64)))
    if pts.shape[0] and prog.max_coord >= pts.shape[1]:
        raise ExprError(f"expression uses coordinate {prog.max_coord} but points have "
                        f"dimension {pts.shape[1]}")
    if not np.all(np.isfinite(pts)):
        raise ValueError("sample points must be finite")
    if use_numba is None:
        use_numba = NUMBA_AVAILABLE
    if use_numba and not NUMBA_AVAILABLE:
        raise RuntimeError("numba kernel requested but numba is unavailable")
    fn = _run_numba if use_numba else _run_python_numpy
    out, status, node, p = fn(prog.op, prog.arg_start, prog.arg_count, prog.args,
                              prog.ival, prog.fval, prog.roots, pts)
    if status != ERR_NONE:
        raise EvaluationSingularity(prog.nodes[node], pts[p], _REASON[status])
    return out


def evaluate_many(exprs, points, use_numba=None) -> np.ndarray:
    exprs = list(exprs)
    if not exprs:
        return np.empty((0, np.atleast_2d(points).shape[0]))
    return run_program(compile_exprs(exprs), points, use_numba)


__all__ = ["Program", "compile_exprs", "run_program", "evaluate_many", "backend",
           "NUMBA_AVAILABLE", "Expr"]
