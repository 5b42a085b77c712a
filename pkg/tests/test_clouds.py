import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from treebraid import oracle
from treebraid.cells import enumerate_cells
from treebraid.clouds import (
    PictureError, bar_tuple, break_edge, build_K, class_of, enumerate_pictures, le, lub, make_picture,
    member_cells, one_classes_below, parse_picture, picture_name, representative,
)


def test_class_of_example(Y3):
    from treebraid.cells import make_cell

    phi = class_of(Y3, make_cell(Y3, [0, 3], [5]))
    assert picture_name(Y3, phi) == "[ec>r1 | C*:1, Cl1:1, Cr2:0]"
    assert phi.n == 3 and phi.dim == 1


def test_classes_partition_cells(Y3):
    for d in range(3):
        pics = list(enumerate_pictures(Y3, 3, d))
        assert len(set(pics)) == len(pics)
        assert sum(sum(1 for _ in member_cells(Y3, p)) for p in pics) == sum(1 for _ in enumerate_cells(Y3, 3, d))
        for p in pics:
            assert class_of(Y3, representative(Y3, p)) == p


def test_break_edge(Y3):
    phi = parse_picture(Y3, "[ec>r1 | C*:1, Cl1:1, Cr2:0]")
    z = break_edge(Y3, phi, 5)
    assert z.dim == 0 and z.counts == (3,)
    with pytest.raises(PictureError):
        break_edge(Y3, phi, 3)


def test_le_is_partial_order(Y3):
    pics = [p for d in range(3) for p in enumerate_pictures(Y3, 3, d)]
    for a in pics:
        assert le(Y3, a, a)
    rel = {(a, b) for a in pics for b in pics if le(Y3, a, b)}
    for a, b in rel:
        if a != b:
            assert (b, a) not in rel
    for a, b in rel:
        for c in pics:
            if (b, c) in rel:
                assert (a, c) in rel


def test_lub_of_classes_below(H5):
    # a class is the least upper bound of the 1-classes below it
    pics = list(enumerate_pictures(H5, 5, 2))
    for phi in random.Random(1).sample(pics, 150):
        gens = one_classes_below(H5, phi)
        assert lub(H5, gens) == phi
        for g in gens:
            assert le(H5, g, phi)


def test_lub_brute_force_y3(Y3):
    gens = list(enumerate_pictures(Y3, 3, 1))
    for k in (2, 3):
        for s in combinations(gens, k):
            assert lub(Y3, list(s)) == oracle.brute_lub(list(s), Y3, 3)


def test_lub_rejects_shared_edge(Y3):
    gens = [g for g in enumerate_pictures(Y3, 3, 1) if g.edges == (5,)]
    assert lub(Y3, gens[:2]) is None


def test_name_round_trip(H5):
    for d in (0, 1, 2):
        for p in list(enumerate_pictures(H5, 5, d))[::37]:
            assert parse_picture(H5, picture_name(H5, p), 5) == p


def test_bar_tuples(H5):
    p = parse_picture(H5, "(A,0,1,~4)", 5)
    assert bar_tuple(H5, p) == "(A,0,1,~4)"
    for g in enumerate_pictures(H5, 5, 1):
        t = bar_tuple(H5, g)
        if t is not None:
            assert parse_picture(H5, t, 5) == g
    with pytest.raises(PictureError):
        parse_picture(H5, "(A,~0,1,4)")
    with pytest.raises(PictureError):
        parse_picture(H5, "(A,0,1,4)")
    with pytest.raises(PictureError):
        parse_picture(H5, "(A,0,1,~4)", 4)


def test_name_errors(Y3):
    for bad in ("[ec>r1 | C*:1, Cl2:1, Cr2:0]", "ec>r1", "[ezz>r1 | C*:3]"):
        with pytest.raises(PictureError):
            parse_picture(Y3, bad)


def test_make_picture_checks(Y3):
    with pytest.raises(PictureError):
        make_picture(Y3, [5], {0: 9})  # too many for the cloud


def test_simplicial_K_matches_classes(Y3, H5):
    # k-simplices of K correspond to (k+1)-classes
    for t, n in ((Y3, 3), (H5, 5)):
        K = build_K(t, n)
        assert len(K.vertices) == len(list(enumerate_pictures(t, n, 1)))
        for d, simp in K.simplices.items():
            assert len(simp) == len(list(enumerate_pictures(t, n, d + 1)))
        assert K.is_simplex(K.simplices[1][0]) and K.is_simplex([0])


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_lub_brute_sampled_h5(seed):
    from treebraid.fixtures import h5

    t = h5()
    gens = list(enumerate_pictures(t, 5, 1))
    s = random.Random(seed).sample(gens, 2)
    assert lub(t, s) == oracle.brute_lub(s, t, 5)
