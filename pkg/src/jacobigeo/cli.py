"""``jacobigeo`` command line: run identity suites, print derived objects, list fixtures."""
from __future__ import annotations

import argparse
import json
import sys

from . import catalog
from .expr import ExprError, simplify
from .geometries.contact import HALF, kenmotsu_defect
from .jacobi_algebroid import JacobiData, basis_forms, sharp_pi_xi
from .manifold import GeometryError, SamplingError, VectorField
from .metric_connection import D_basis, compatibility_defect_endo
from .report import DEFAULT_POINTS, DEFAULT_SEED, DEFAULT_TOL, CheckContext
from .structfile import StructureError

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_VIOLATED = 0, 1, 2, 3
SUITE_CHOICES = catalog.SUITES + ("all",)
DERIVABLE = ("reeb", "pi", "lambda", "sharp", "christoffel", "D", "J", "defects")


class NotApplicable(GeometryError):
    pass


def _load(target):
    try:
        return catalog.load_any(target)
    except FileNotFoundError:
        raise StructureError(f"no fixture or file named {target!r}; available fixtures: "
                             f"{', '.join(catalog.names())}", None, target) from None


# -- check ----------------------------------------------------------------------------

def run_check(target, suite="all", points=DEFAULT_POINTS, seed=DEFAULT_SEED, tol=DEFAULT_TOL,
              expect_fixture=False):
    """Return ``(document, exit_code, rows)``; rows pair each report with its expectation."""
    fx = _load(target)
    ctx = CheckContext(fx.chart, points, seed, tol)
    reports = catalog.run_suite(fx, suite, ctx)
    table = fx.expect if expect_fixture else {}
    rows = [(r, table.get(r.name, "pass")) for r in reports]
    doc = {"structure": fx.name, "suite": suite,
           "checks": [r.to_dict() for r in reports], "seed": seed, "points": points}
    if any(r.verdict == "theorem-violated" for r in reports):
        code = EXIT_VIOLATED
    elif any(r.verdict != want for r, want in rows):
        code = EXIT_MISMATCH
    else:
        code = EXIT_OK
    return doc, code, rows


def report_json(doc):
    return json.dumps(doc, indent=2)


def _cmd_check(args, out):
    doc, code, rows = run_check(args.target, args.suite, args.points, args.seed, args.tol,
                                args.expect == "fixture")
    if args.json:
        print(report_json(doc), file=out)
        return code
    print(f"{doc['structure']}: suite {args.suite}, {args.points} points, seed {args.seed}",
          file=out)
    for rep, want in rows:
        mark = "ok " if rep.verdict == want else "MISMATCH"
        line = f"  [{mark}] {rep}"
        if rep.verdict != want:
            line += f"  expected {want}"
        print(line, file=out)
    n_bad = sum(r.verdict != w for r, w in rows)
    print(f"{len(rows) - n_bad}/{len(rows)} checks as expected", file=out)
    return code


# -- derive ---------------------------------------------------------------------------

def _label(chart, *idx):
    names = [chart.names[i] for i in idx]
    sep = "" if all(len(n) == 1 for n in names) else "."
    return sep.join(names)


def _fmt(chart, e):
    return chart.fmt(simplify(e))


def _need_metric(fx, obj):
    if fx.g is None:
        raise NotApplicable(f"{obj!r} needs a metric; {fx.name!r} has none")
    return fx.package()


def derive_lines(fx, obj):
    chart = fx.chart
    n = chart.dim
    if obj == "reeb":
        if fx.contact is None and fx.acm is None:
            raise NotApplicable(f"'reeb' applies to contact structures, not kind {fx.kind!r}")
        return [f"xi = {fx.xi.display()}"]
    if obj == "pi":
        return [f"pi.{_label(chart, a, b)} = {_fmt(chart, fx.pi[a, b])}"
                for a in range(n) for b in range(a + 1, n)]
    if obj == "lambda":
        lam = fx.lam()
        return [f"# lambda choice: {fx.lam_choice}"] + [
            f"lambda.{chart.names[i]} = {_fmt(chart, c)}" for i, c in enumerate(lam.comps)]
    if obj == "sharp":
        j = JacobiData(chart, fx.pi, fx.xi)
        out = []
        for a, da in enumerate(basis_forms(chart)):
            v = sharp_pi_xi(j, da)
            out += [f"sharp.{_label(chart, a, b)} = {_fmt(chart, c)}"
                    for b, c in enumerate(v.comps)]
        return out
    if obj == "christoffel":
        pkg = _need_metric(fx, obj)
        out = [f"Gamma.{_label(chart, k, i, j)} = {_fmt(chart, pkg.christoffel[k][i][j])}"
               for k in range(n) for i in range(n) for j in range(i, n)
               if not simplify(pkg.christoffel[k][i][j]).is_const(0)]
        return out or ["# all Christoffel symbols vanish"]
    if obj == "D":
        pkg = _need_metric(fx, obj)
        D = D_basis(pkg)
        out = [f"D.{_label(chart, a, b, k)} = {_fmt(chart, c)}"
               for a in range(n) for b in range(n) for k, c in enumerate(D[a][b].comps)
               if not simplify(c).is_const(0)]
        return out or ["# D vanishes on coordinate covectors"]
    if obj == "J":
        pkg = _need_metric(fx, obj)
        return [f"J.{_label(chart, i, j)} = {_fmt(chart, pkg.J.comps[i][j])}"
                for i in range(n) for j in range(n)]
    if obj == "defects":
        pkg = _need_metric(fx, obj)
        B = basis_forms(chart)
        out = []
        for a in range(n):
            for b in range(n):
                d = compatibility_defect_endo(pkg, B[a], B[b])
                out += [f"compatibility.{_label(chart, a, b, k)} = {_fmt(chart, c)}"
                        for k, c in enumerate(d.comps) if not simplify(c).is_const(0)]
        if fx.acm is not None:
            E = [VectorField.basis(chart, i) for i in range(n)]
            for a in range(n):
                for b in range(n):
                    d = kenmotsu_defect(fx.acm, HALF, E[a], E[b], pkg)
                    out += [f"kenmotsu.{_label(chart, a, b, k)} = {_fmt(chart, c)}"
                            for k, c in enumerate(d.comps) if not simplify(c).is_const(0)]
        return out or ["# all defects vanish"]
    raise NotApplicable(f"unknown object {obj!r}")


def _cmd_derive(args, out):
    fx = _load(args.target)
    for line in derive_lines(fx, args.object):
        print(line, file=out)
    return EXIT_OK


# -- catalog --------------------------------------------------------------------------

def _cmd_catalog(args, out):
    rows = catalog.listing()
    if args.json:
        doc = [{"name": n, "kind": k, "expect": e} for n, k, e in rows]
        print(json.dumps(doc, indent=2), file=out)
        return EXIT_OK
    for n, k, e in rows:
        print(f"{n}  ({k})", file=out)
        for check, verdict in e.items():
            print(f"    {check:32s} {verdict}", file=out)
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="jacobigeo",
                                description="Verify Jacobi-structure identities on sample points.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="run an identity suite")
    c.add_argument("target", help="fixture name or structure file (.struct or .json)")
    c.add_argument("--suite", default="all", choices=SUITE_CHOICES)
    c.add_argument("--points", type=int, default=DEFAULT_POINTS)
    c.add_argument("--seed", type=int, default=DEFAULT_SEED)
    c.add_argument("--tol", type=float, default=DEFAULT_TOL)
    c.add_argument("--json", action="store_true", help="emit the JSON report")
    c.add_argument("--expect", choices=("pass", "fixture"), default="pass",
                   help="compare against all-pass (default) or the structure's expect table")
    c.set_defaults(func=_cmd_check)

    d = sub.add_parser("derive", help="print a derived object")
    d.add_argument("target")
    d.add_argument("--object", required=True, choices=DERIVABLE)
    d.set_defaults(func=_cmd_derive)

    k = sub.add_parser("catalog", help="list built-in fixtures and expected verdicts")
    k.add_argument("--json", action="store_true")
    k.set_defaults(func=_cmd_catalog)
    return p


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    if getattr(args, "points", 1) < 1:
        print("jacobigeo: --points must be positive", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args, out)
    except (StructureError, catalog.FixtureError, catalog.UnknownFixture, NotApplicable,
            ExprError, SamplingError, GeometryError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"jacobigeo: {msg}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
