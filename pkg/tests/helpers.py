import numpy as np

from jacobigeo.expr import evaluate_many, simplify
from jacobigeo.manifold import components


def max_abs(objs, chart, n=12, seed=7):
    """Largest absolute component value of ``objs`` at seeded sample points."""
    if not isinstance(objs, (list, tuple)):
        objs = [objs]
    exprs = [simplify(c) for o in objs for c in components(o)]
    exprs = [e for e in exprs if not e.is_const(0)]
    if not exprs:
        return 0.0
    return float(np.max(np.abs(evaluate_many(exprs, chart.sample(n, seed=seed)))))


def vanishes(objs, chart, tol=1e-9, **kw):
    return max_abs(objs, chart, **kw) < tol
