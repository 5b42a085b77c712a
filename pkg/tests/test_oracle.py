import numpy as np
import pytest

from treebraid import oracle
from treebraid.cocycles import cochain_vector, critical_pictures
from treebraid.complex import UDComplex


def test_sparse_and_dense_agree(Y3):
    X = UDComplex(Y3, 3)
    assert oracle.dense_snf_homology(X) == oracle.ReducedComplex.build(X).homology()


def test_remainders(rc_y3, rc_h5):
    assert rc_y3.differential_is_zero() and rc_h5.differential_is_zero()
    assert [len(rc_y3.remainder(d)) for d in range(4)] == [1, 3, 0, 0]
    assert [len(rc_h5.remainder(d)) for d in range(6)] == [1, 20, 5, 0, 0, 0]


def test_budget(Y3, monkeypatch):
    with pytest.raises(oracle.OracleBudgetError):
        oracle.ReducedComplex.build(UDComplex(Y3, 3), budget=10)
    monkeypatch.setenv("TREEBRAID_BUDGET", "7")
    assert oracle.default_budget() == 7


def test_coboundaries_detected(Y3, rc_y3):
    X = rc_y3.X
    B = X.boundary_matrix(2).toarray()
    # delta of any 1-cochain is a coboundary
    rng = np.random.default_rng(0)
    for _ in range(5):
        v = rng.integers(-2, 3, X.size(1))
        assert oracle.is_coboundary(rc_y3, 2, B.T @ v)
    # a critical cocycle is not
    for p in critical_pictures(Y3, 3, 1):
        assert not oracle.is_coboundary(rc_y3, 1, cochain_vector(X, p, 1))


def test_pairing_is_unimodular(H5, rc_h5):
    cps = critical_pictures(H5, 5, 2)
    ok, P = oracle.pairing_check(rc_h5, 2, [cochain_vector(rc_h5.X, p, 2) for p in cps])
    assert ok and P.shape == (5, 5)


def test_pairing_rejects_dependent_family(Y3, rc_y3):
    cps = critical_pictures(Y3, 3, 1)
    vecs = [cochain_vector(rc_y3.X, p, 1) for p in cps]
    ok, _ = oracle.pairing_check(rc_y3, 1, [vecs[0], vecs[0], vecs[1]])
    assert not ok
    ok, _ = oracle.pairing_check(rc_y3, 1, [2 * vecs[0], vecs[1], vecs[2]])
    assert not ok
