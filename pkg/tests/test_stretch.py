"""Stretch fixture: the five-essential-vertex tree with n=4.

The tree is not shipped (its figure could not be recovered from text).  Point
TREEBRAID_UNVERIFIED_TREE at a tree file to run these checks; they are not
part of the acceptance suite.
"""
import os

import pytest

from treebraid import morse, ring
from treebraid.tree import parse_tree, subdivide_for

PATH = os.environ.get("TREEBRAID_UNVERIFIED_TREE")

pytestmark = [
    pytest.mark.unverified_tree,
    pytest.mark.skipif(not PATH, reason="set TREEBRAID_UNVERIFIED_TREE to a candidate tree file"),
]


@pytest.fixture(scope="module")
def tree():
    with open(PATH, encoding="utf-8") as fh:
        return subdivide_for(parse_tree(fh.read()), 4)


def test_betti(tree):
    # H^0 is Z (the quoted "0" is taken as a misprint)
    assert morse.betti(tree, 4) == [1, 50, 18]


def test_probe_reports(tree):
    rep = ring.conjecture_probe(tree, 4)
    assert rep.dims[:2] == [1, 50]
