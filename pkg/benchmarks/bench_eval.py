"""Time the numba and pure-numpy evaluation kernels on fixture-derived expressions.

    python3 benchmarks/bench_eval.py [--fixture contact-r5] [--points 20 2000 200000]

Compilation of the numba kernel is timed separately from steady-state runs.
"""
import argparse
import time

import numpy as np

from jacobigeo import catalog
from jacobigeo.expr import kernels
from jacobigeo.jacobi_algebroid import basis_forms
from jacobigeo.manifold import components
from jacobigeo.metric_connection import D_basis


def workload(name):
    """Christoffel symbols, D on coordinate covectors and the Poisson tensor of a fixture."""
    fx = catalog.load(name)
    pkg = fx.package()
    exprs = [c for row in pkg.christoffel for r in row for c in r]
    exprs += [c for row in D_basis(pkg) for d in row for c in d.comps]
    exprs += components(fx.pi)
    n = len(basis_forms(fx.chart))
    return fx.chart, [e for e in exprs if not e.is_const(0)], n


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--fixture", default="contact-r5", choices=catalog.names())
    ap.add_argument("--points", type=int, nargs="+", default=[20, 2000, 200000])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    chart, exprs, dim = workload(args.fixture)
    prog = kernels.compile_exprs(exprs)
    print(f"fixture {args.fixture}: {len(exprs)} expressions, {len(prog.op)} instructions, "
          f"dim {dim}")
    if not kernels.NUMBA_AVAILABLE:
        print("numba kernel unavailable (JACOBIGEO_NUMBA=0 or numba missing); numpy only")

    if kernels.NUMBA_AVAILABLE:
        pts = chart.sample(4, seed=0)
        t = time.perf_counter()
        kernels.run_program(prog, pts, use_numba=True)
        print(f"numba first call (compile or cache load): {time.perf_counter() - t:.3f}s")

    print(f"{'points':>8} {'numpy [s]':>12} {'numba [s]':>12} {'speedup':>8} {'max |diff|':>11}")
    for n in args.points:
        pts = np.random.default_rng([0, n]).uniform(-1, 1, size=(n, chart.dim))
        t_np = best_of(lambda: kernels.run_program(prog, pts, use_numba=False), args.repeat)
        if kernels.NUMBA_AVAILABLE:
            t_nb = best_of(lambda: kernels.run_program(prog, pts, use_numba=True), args.repeat)
            a = kernels.run_program(prog, pts, use_numba=False)
            b = kernels.run_program(prog, pts, use_numba=True)
            diff = float(np.max(np.abs(a - b) / (1 + np.abs(a))))
            print(f"{n:>8} {t_np:>12.5f} {t_nb:>12.5f} {t_np / t_nb:>8.1f} {diff:>11.2e}")
        else:
            print(f"{n:>8} {t_np:>12.5f} {'-':>12} {'-':>8} {'-':>11}")


if __name__ == "__main__":
    main()
