"""Check reports and the seeded sampling context shared by every checker."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .expr import evaluate_many
from .manifold import components

VERDICTS = ("pass", "fail", "preconditions-failed", "theorem-violated")
DEFAULT_POINTS = 20
DEFAULT_SEED = 0
DEFAULT_TOL = 1e-9


@dataclass
class CheckReport:
    """Outcome of one identity check.

    ``anchor`` is a short statement of the identity being tested.
    """

    name: str
    anchor: str
    points: int
    seed: int
    per_point: list
    residual: float
    tol: float
    verdict: str
    note: str = ""
    parts: list = field(default_factory=list)

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")

    @property
    def passed(self):
        return self.verdict == "pass"

    def to_dict(self):
        r = self.residual
        return {"name": self.name, "anchor": self.anchor,
                "residual": None if r is None or math.isnan(r) else float(r),
                "tol": self.tol, "verdict": self.verdict}

    def walk(self):
        """This report followed by all nested sub-reports, depth first."""
        yield self
        for p in self.parts:
            yield from p.walk()

    def __str__(self):
        res = "n/a" if self.residual is None or math.isnan(self.residual) else f"{self.residual:.3e}"
        s = f"{self.verdict:>20}  {self.name}  residual={res} tol={self.tol:g}"
        return s + (f"  ({self.note})" if self.note else "")


class CheckContext:
    """Sample points and random-input generator for one chart.

    Points come from ``default_rng([seed, 0])`` and random polynomial inputs
    from ``default_rng([seed, 1])``, so a check is reproducible from
    ``(chart, points, seed)`` alone.
    """

    def __init__(self, chart, points=DEFAULT_POINTS, seed=DEFAULT_SEED, tol=DEFAULT_TOL):
        self.chart = chart
        self.n_points = int(points)
        self.seed = int(seed)
        self.tol = float(tol)
        self.rng = np.random.default_rng([self.seed, 1])
        self._pts = None

    @property
    def pts(self):
        if self._pts is None:
            self._pts = self.chart.sample(self.n_points, np.random.default_rng([self.seed, 0]))
        return self._pts

    def per_point(self, objs):
        """Max absolute component over ``objs`` at each sample point."""
        exprs = components(objs)
        exprs = [e for e in exprs if not e.is_const(0)]
        if not exprs:
            return np.zeros(self.n_points)
        vals = evaluate_many(exprs, self.pts)
        return np.max(np.abs(vals), axis=0)

    def report(self, name, anchor, objs, tol=None, expect_zero=True, note=""):
        tol = self.tol if tol is None else tol
        pp = self.per_point(objs)
        res = float(pp.max()) if pp.size else 0.0
        ok = res < tol if expect_zero else res >= tol
        return CheckReport(name, anchor, self.n_points, self.seed,
                           [float(v) for v in pp], res, tol,
                           "pass" if ok else "fail", note)

    def from_values(self, name, anchor, per_point, tol=None, note=""):
        tol = self.tol if tol is None else tol
        pp = np.asarray(per_point, float)
        res = float(pp.max()) if pp.size else 0.0
        return CheckReport(name, anchor, self.n_points, self.seed, [float(v) for v in pp],
                           res, tol, "pass" if res < tol else "fail", note)

    def preconditions_failed(self, name, anchor, note, parts=()):
        return CheckReport(name, anchor, self.n_points, self.seed, [], float("nan"),
                           self.tol, "preconditions-failed", note, list(parts))

    def combine(self, name, anchor, parts, note=""):
        """Aggregate: passes iff every part passes; residual is the largest."""
        parts = list(parts)
        if any(p.verdict == "theorem-violated" for p in parts):
            verdict = "theorem-violated"
        elif all(p.verdict == "pass" for p in parts):
            verdict = "pass"
        elif any(p.verdict == "preconditions-failed" for p in parts):
            verdict = "preconditions-failed"
        else:
            verdict = "fail"
        res = [p.residual for p in parts if p.residual is not None and not math.isnan(p.residual)]
        pp = np.zeros(self.n_points)
        for p in parts:
            if len(p.per_point) == self.n_points:
                pp = np.maximum(pp, p.per_point)
        return CheckReport(name, anchor, self.n_points, self.seed, [float(v) for v in pp],
                           max(res) if res else float("nan"),
                           max([p.tol for p in parts], default=self.tol), verdict, note, parts)


def context_for(chart, ctx=None, **kw):
    if ctx is not None:
        return ctx
    return CheckContext(chart, **kw)


__all__ = ["CheckContext", "CheckReport", "DEFAULT_POINTS", "DEFAULT_SEED", "DEFAULT_TOL",
           "VERDICTS", "context_for"]
