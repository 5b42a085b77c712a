"""Time the numba kernels against their numpy / python fallbacks.

    python benchmarks/bench_kernels.py [--repeat 3] [--trees Y3 H5 CAT4]

Both variants are called directly, so the TREEBRAID_NUMBA setting does not
matter here.  The numba versions are warmed up once before timing.
"""
import argparse
import time

import numpy as np

from treebraid import kernels, oracle
from treebraid._accel import HAVE_NUMBA
from treebraid.complex import UDComplex
from treebraid.fixtures import caterpillar4, h5, y3

TREES = {"Y3": (y3, 3), "H5": (h5, 5), "CAT4": (caterpillar4, 4)}


def best_of(fn, repeat):
    ts = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        ts.append(time.perf_counter() - t0)
    return min(ts)


def cases(X):
    d = max(range(1, X.n + 1), key=X.size)
    cl = (X.states(d), X.parent, X.child_ptr, X.child_idx)
    bd = (X.states(d), X.keys(d - 1), X.parent, X.pow3)
    F, dims, _ = oracle.assemble(X)
    C = F.T.tocsc()
    C.sort_indices()
    arrs = tuple(a.astype(np.int64) for a in (F.indptr, F.indices, F.data, C.indptr, C.indices, C.data))
    t, pa, pb = kernels._reduce_jit(dims, *arrs, 0)
    phi = np.ones(len(dims), dtype=np.int64)
    return [
        ("classify", lambda: kernels._classify_jit(*cl), lambda: kernels._classify_numpy(*cl)),
        ("boundary", lambda: kernels._boundary_jit(*bd), lambda: kernels._boundary_numpy(*bd)),
        ("free pairs", lambda: kernels._reduce_jit(dims, *arrs, 0),
         lambda: kernels._reduce_loops(dims, *arrs, 0)),
        ("pullback", lambda: kernels._pullback_jit(phi.copy(), 1, dims, t, pa, pb, *arrs),
         lambda: kernels._pullback_loops(phi.copy(), 1, dims, t, pa, pb, *arrs)),
    ]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--trees", nargs="+", default=list(TREES), choices=list(TREES))
    a = ap.parse_args()
    if not HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")
    print(f"{'tree':6} {'cells':>8} {'kernel':12} {'numba s':>10} {'fallback s':>11} {'speedup':>8}")
    for name in a.trees:
        make, n = TREES[name]
        X = UDComplex(make(), n)
        for label, fast, slow in cases(X):
            fast()  # compile
            tf = best_of(fast, a.repeat)
            ts = best_of(slow, a.repeat)
            print(f"{name:6} {sum(X.sizes()):8d} {label:12} {tf:10.5f} {ts:11.5f} {ts / max(tf, 1e-9):8.1f}x")


if __name__ == "__main__":
    main()
