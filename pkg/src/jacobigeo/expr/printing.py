"""Infix printer.  The output uses exactly the grammar accepted by the parser."""
from __future__ import annotations

from fractions import Fraction

# binding strength of the printed form
_ADD, _MUL, _UNARY, _POW, _ATOM = 1, 2, 3, 4, 5

_default_names = None


def _coord_name(i, names):
    if names is not None and i < len(names):
        return names[i]
    return f"x{i}"


def _num(v):
    if isinstance(v, int):
        return str(v)
    if isinstance(v, Fraction):
        if v.denominator == 1:
            return str(v.numerator)
        return f"{v.numerator}/{v.denominator}"
    return repr(float(v))


def _negative(e):
    """True when ``e`` prints with a leading minus sign."""
    if e.kind == "const":
        return e.value < 0
    if e.kind == "mul" and e.args[0].kind == "const":
        return e.args[0].value < 0
    return e.kind == "neg"


def _const_prec(v):
    if v < 0:
        return _UNARY
    if isinstance(v, Fraction) and v.denominator != 1:
        return _MUL
    return _ATOM


def _fmt(e, names):
    """Return (text, precedence)."""
    k = e.kind
    if k == "const":
        return _num(e.value), _const_prec(e.value)
    if k == "coord":
        return _coord_name(e.value, names), _ATOM
    if k in ("exp", "ln", "sin", "cos"):
        return f"{k}({_fmt(e.args[0], names)[0]})", _ATOM
    if k == "neg":
        return "-" + _wrap(e.args[0], names, _POW), _UNARY
    if k == "add":
        parts = [_wrap(e.args[0], names, _ADD)]
        for t in e.args[1:]:
            if _negative(t):
                parts.append(" - " + _wrap(_abs_term(t), names, _MUL))
            else:
                parts.append(" + " + _wrap(t, names, _MUL))
        return "".join(parts), _ADD
    if k == "sub":
        return (_wrap(e.args[0], names, _ADD) + " - " + _wrap(e.args[1], names, _MUL),
                _ADD)
    if k == "div":
        return (_wrap(e.args[0], names, _MUL) + "/" + _wrap(e.args[1], names, _UNARY + 1),
                _MUL)
    if k == "pow":
        if e.value < 0:
            return _fraction_text(Fraction(1), [], [(e.args[0], -e.value)], names)
        return _wrap(e.args[0], names, _ATOM) + "^" + str(e.value), _POW
    if k == "mul":
        args = list(e.args)
        coeff = Fraction(1)
        if args[0].kind == "const":
            coeff = args[0].value
            args = args[1:]
        num, den = [], []
        for f in args:
            if f.kind == "pow" and f.value < 0:
                den.append((f.args[0], -f.value))
            else:
                num.append(f)
        if not e.normal and den:
            # raw products keep their literal shape
            return "*".join(_wrap(f, names, _MUL) for f in e.args), _MUL
        return _fraction_text(coeff, num, den, names)
    raise ValueError(f"cannot print node kind {k}")


def _abs_term(t):
    from .core import Expr, const
    if t.kind == "const":
        return const(-t.value)
    if t.kind == "neg":
        return t.args[0]
    c = -t.args[0].value
    rest = t.args[1:]
    if c == 1:
        if len(rest) == 1:
            return rest[0]
        return Expr("mul", rest, None, t.normal)
    return Expr("mul", (const(c),) + rest, None, t.normal)


def _fraction_text(coeff, num, den, names):
    sign = ""
    if coeff < 0:
        sign = "-"
        coeff = -coeff
    if isinstance(coeff, Fraction):
        p, q = coeff.numerator, coeff.denominator
    else:
        p, q = coeff, 1
    top = []
    if p != 1 or not num:
        top.append(_num(Fraction(p)) if isinstance(p, int) else _num(p))
    top.extend(_wrap(f, names, _MUL + 1) if f.kind != "pow" else _wrap(f, names, _POW)
               for f in num)
    text = "*".join(top)
    bottom = []
    if q != 1:
        bottom.append(str(q))
    for b, n in den:
        bt = _wrap(b, names, _ATOM)
        bottom.append(bt if n == 1 else f"{bt}^{n}")
    if bottom:
        if len(bottom) == 1:
            text = f"{text}/{bottom[0]}"
        else:
            text = f"{text}/({'*'.join(bottom)})"
    if sign:
        return sign + text, _UNARY
    return text, _MUL if (bottom or len(top) > 1) else _fmt_prec_single(num, p)


def _fmt_prec_single(num, p):
    if not num:
        return _ATOM
    if p != 1:
        return _MUL
    return _ATOM


def _wrap(e, names, min_prec):
    text, prec = _fmt(e, names)
    if prec < min_prec:
        return f"({text})"
    return text


def to_string(e, names=None) -> str:
    """Render ``e``; coordinates are named ``x0, x1, ...`` unless ``names`` is given."""
    return _fmt(e, names)[0]
