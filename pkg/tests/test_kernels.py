import os
import subprocess
import sys

import numpy as np
import pytest

from treebraid import kernels, oracle
from treebraid._accel import HAVE_NUMBA
from treebraid.complex import UDComplex

needs_numba = pytest.mark.skipif(not HAVE_NUMBA, reason="numba not installed")


@pytest.fixture(scope="module")
def X(H5):
    return UDComplex(H5, 5)


@needs_numba
def test_classify_backends_agree(X):
    for d in range(X.n + 1):
        if X.size(d) == 0:
            continue
        args = (X.states(d), X.parent, X.child_ptr, X.child_idx)
        k1, w1 = kernels._classify_jit(*args)
        k2, w2 = kernels._classify_numpy(*args)
        assert (k1 == k2).all() and (w1 == w2).all()


@needs_numba
def test_boundary_backends_agree(X):
    for d in (1, 2, 3):
        args = (X.states(d), X.keys(d - 1), X.parent, X.pow3)
        a = sorted(zip(*(np.asarray(x).tolist() for x in kernels._boundary_jit(*args))))
        b = sorted(zip(*(np.asarray(x).tolist() for x in kernels._boundary_numpy(*args))))
        assert a == b


@needs_numba
def test_reduction_backends_agree(Y3):
    Xy = UDComplex(Y3, 3)
    F, dims, off = oracle.assemble(Xy)
    C = F.T.tocsc()
    C.sort_indices()
    arrs = tuple(a.astype(np.int64) for a in (F.indptr, F.indices, F.data, C.indptr, C.indices, C.data))
    t1, a1, b1 = kernels._reduce_jit(dims, *arrs, 0)
    t2, a2, b2 = kernels._reduce_loops(dims, *arrs, 0)
    assert (t1 == t2).all() and (a1 == a2).all() and (b1 == b2).all()
    phi = np.arange(len(dims), dtype=np.int64) % 3 - 1
    p1 = kernels._pullback_jit(phi.copy(), 1, dims, t1, a1, b1, *arrs)
    p2 = kernels._pullback_loops(phi.copy(), 1, dims, t2, a2, b2, *arrs)
    assert (p1 == p2).all()


def test_free_pairs_are_units(Y3):
    rc = oracle.ReducedComplex.build(UDComplex(Y3, 3))
    F = oracle.assemble(rc.X)[0].tocsr()
    for a, b in zip(rc.pa, rc.pb):
        assert abs(F[b, a]) == 1
        assert rc.dims[a] == rc.dims[b] + 1


def test_numpy_backend_in_subprocess():
    code = ("from treebraid import backend_name, morse\n"
            "from treebraid.fixtures import h5\n"
            "print(backend_name(), morse.betti(h5(), 5))\n")
    env = dict(os.environ, TREEBRAID_NUMBA="0")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy [1, 20, 5]"
