import random

import numpy as np

from treebraid import morse
from treebraid.cells import make_cell
from treebraid.clouds import class_of, enumerate_pictures, make_picture, member_cells
from treebraid.cocycles import (
    bad_edges, blocked_members, blocked_representative, cochain_vector, critical_pictures, depth,
    evaluate, expand, is_critical, rank, support_indices, support_size,
)
from treebraid.complex import UDComplex
from treebraid.morse import is_order_respecting


def test_support_size_and_indices(H5):
    X = UDComplex(H5, 5)
    for d in (1, 2):
        pics = list(enumerate_pictures(H5, 5, d))
        total = 0
        for p in pics[::11]:
            idx = support_indices(X, p)
            assert len(idx) == support_size(p)
            assert all(class_of(H5, X.cell(d, int(i))) == p for i in idx)
            total += len(idx)
        assert sum(support_size(p) for p in pics) == X.size(d)


def test_cochain_vector_is_expand(Y3):
    X = UDComplex(Y3, 3)
    for p in enumerate_pictures(Y3, 3, 1):
        v = cochain_vector(X, p)
        e = expand(Y3, p)
        assert {X.cell(1, int(i)) for i in np.flatnonzero(v)} == set(e)


def test_evaluate(Y3):
    c = make_cell(Y3, [0, 3], [5])
    phi = class_of(Y3, c)
    assert evaluate(Y3, phi, c) == 1
    assert evaluate(Y3, phi, make_cell(Y3, [0, 4], [5])) == 1  # l1, l2 share a cloud
    assert evaluate(Y3, phi, make_cell(Y3, [0, 6], [5])) == 0


def test_blocked_representative_is_blocked(H5):
    for d in (1, 2):
        for p in list(enumerate_pictures(H5, 5, d))[::17]:
            r = blocked_representative(H5, p)
            assert class_of(H5, r) == p
            assert all(morse.is_blocked(H5, v, r) for v in r.vertices)


def test_bad_edges_do_not_depend_on_representative(H5):
    pics = list(enumerate_pictures(H5, 5, 2))
    for p in random.Random(3).sample(pics, 60):
        want = bad_edges(H5, p)
        for c in blocked_members(H5, p):
            assert tuple(w for w in p.edges if is_order_respecting(H5, w, c)) == want


def test_one_critical_cell_per_critical_class(Y3, H5):
    # a critical class holds exactly one critical cell, the others none
    for t, n in ((Y3, 3), (H5, 5)):
        for d in (1, 2):
            for p in enumerate_pictures(t, n, d):
                crit = sum(morse.classify(t, c).kind == "critical" for c in member_cells(t, p))
                assert crit == (1 if is_critical(t, p) else 0)


def test_critical_census(Y3, H5):
    for t, n in ((Y3, 3), (H5, 5)):
        X = UDComplex(t, n)
        counts = morse.critical_counts(X)
        assert [len(critical_pictures(t, n, d)) for d in range(n + 1)] == counts


def test_example_rank_and_depth(FORK28):
    v = FORK28.vertex
    phi = make_picture(FORK28, [v("v16"), v("v19")], {0: 1, v("v13"): 1})
    assert depth(FORK28, phi) == 2
    assert rank(FORK28, phi) == (-2, 1)
    assert bad_edges(FORK28, phi) == (v("v19"),)


def test_zero_class_is_critical(Y3):
    (z,) = enumerate_pictures(Y3, 3, 0)
    assert is_critical(Y3, z) and rank(Y3, z) == (0, 0)
