"""Discrete Morse classification of cells (critical / redundant / collapsible)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .cells import Cell, CellError, covered
from .complex import UDComplex
from .tree import PlanarTree, TreeError

CRITICAL, REDUNDANT, COLLAPSIBLE = "critical", "redundant", "collapsible"


@dataclass(frozen=True)
class Classification:
    kind: str
    witness: int | None  # least unblocked vertex / least order-respecting edge (its tau)


def is_blocked(tree: PlanarTree, v: int, c: Cell) -> bool:
    if v not in c.vertices:
        raise CellError(f"vertex {tree.names[v]} is not in the cell")
    if v == 0:
        return True
    p = tree.parent[v]
    return p in covered(tree, c)


def is_order_respecting(tree: PlanarTree, tau: int, c: Cell) -> bool:
    """False iff a vertex of c hangs off iota(e) strictly between iota(e) and tau(e)."""
    if tau not in c.edges:
        raise CellError(f"edge {tree.edge_name(tau)} is not in the cell")
    p = tree.parent[tau]
    for u in c.vertices:
        if tree.adjacent(u, p) and p < u < tau:
            return False
    return True


def classify(tree: PlanarTree, c: Cell) -> Classification:
    members = c.members(tree)
    nums = [m[0] for m in members]
    assert len(set(nums)) == len(nums), "members of a cell have distinct numbers"
    for num, kind, x in members:
        if kind == "v":
            if not is_blocked(tree, x, c):
                return Classification(REDUNDANT, x)
        elif is_order_respecting(tree, x, c):
            return Classification(COLLAPSIBLE, x)
    return Classification(CRITICAL, None)


def check_subdivided(tree: PlanarTree, n: int) -> None:
    if not tree.is_sufficiently_subdivided(n):
        raise TreeError(f"tree is not sufficiently subdivided for n={n}; run subdivide first")


def critical_counts(X: UDComplex) -> list[int]:
    out = []
    for d in range(X.n + 1):
        if X.size(d) == 0:
            out.append(0)
            continue
        kinds, _ = X.classify(d)
        out.append(int(np.count_nonzero(kinds == kernels.CRITICAL)))
    return out


def betti(tree: PlanarTree, n: int, X: UDComplex | None = None) -> list[int]:
    """Critical cell counts, which are the Betti numbers of UD^n T."""
    check_subdivided(tree, n)
    X = X if X is not None else UDComplex(tree, n)
    out = critical_counts(X)
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def critical_cells(X: UDComplex, dim: int) -> list[Cell]:
    kinds, _ = X.classify(dim)
    return [X.cell(dim, int(i)) for i in np.flatnonzero(kinds == kernels.CRITICAL)]
