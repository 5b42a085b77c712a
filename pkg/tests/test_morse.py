import pytest

from treebraid import morse, oracle
from treebraid.cells import make_cell
from treebraid.complex import UDComplex
from treebraid.fixtures import PATH4, named_tree
from treebraid.tree import TreeError, parse_tree


def test_example_cells_with_witnesses(Y3):
    a = morse.classify(Y3, make_cell(Y3, [0, 4], [5]))
    assert (a.kind, a.witness) == ("redundant", 4)
    b = morse.classify(Y3, make_cell(Y3, [0, 3], [5]))
    assert (b.kind, b.witness) == ("critical", None)
    c = morse.classify(Y3, make_cell(Y3, [0, 5], [3]))
    assert (c.kind, c.witness) == ("collapsible", 3)
    assert morse.is_blocked(Y3, 5, make_cell(Y3, [0, 5], [3]))
    assert not morse.is_order_respecting(Y3, 5, make_cell(Y3, [0, 3], [5]))


def test_kernel_agrees_with_reference(H5):
    X = UDComplex(H5, 5)
    code = {"critical": 0, "redundant": 1, "collapsible": 2}
    for d in (1, 2):
        kinds, wit = X.classify(d)
        for i in range(0, X.size(d), 29):
            cl = morse.classify(H5, X.cell(d, i))
            assert kinds[i] == code[cl.kind]
            assert wit[i] == (-1 if cl.witness is None else cl.witness)


def test_vertex_count_of_zero_cells(Y3):
    # a single critical 0-cell: everything piled at the basepoint
    assert morse.critical_cells(UDComplex(Y3, 3), 0) == [make_cell(Y3, [0, 1, 2], [])]


@pytest.mark.parametrize("name,n,expect", [
    ("Y3", 2, [1, 1]), ("Y3", 3, [1, 3]), ("PATH4", 3, [1]),
    ("H", 3, None), ("CATERPILLAR", 3, None),
])
def test_betti_matches_snf(name, n, expect):
    t = named_tree(name, n)
    b = morse.betti(t, n)
    if expect is not None:
        assert b == expect
    H = oracle.snf_homology(t, n)
    ranks = [r for r, _ in H]
    assert ranks[:len(b)] == b and not any(ranks[len(b):])
    assert all(not tors for _, tors in H)


def test_betti_needs_subdivision():
    with pytest.raises(TreeError):
        morse.betti(parse_tree("*(A(TL,B(TR,BR)))"), 5)


def test_path_is_contractible():
    t = parse_tree(PATH4)
    assert morse.betti(t, 2) == [1]
