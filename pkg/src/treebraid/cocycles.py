"""Standard cocycles: evaluation, blocked representatives, bad edges, rank."""
from __future__ import annotations

from typing import Iterator, NamedTuple

import numpy as np

from .cells import Cell
from .clouds import CloudPicture, PictureError, class_of, enumerate_pictures, member_cells, representative
from .complex import UDComplex
from .morse import is_order_respecting
from .sums import FormalSum
from .tree import PlanarTree


class Rank(NamedTuple):
    neg_depth: int
    bad_count: int


def evaluate(tree: PlanarTree, phi: CloudPicture, c: Cell) -> int:
    if c.dim != phi.dim:
        raise PictureError(f"cannot evaluate a {phi.dim}-cocycle on a {c.dim}-cell")
    return int(class_of(tree, c) == phi)


def _slide(tree: PlanarTree, c: Cell) -> Cell:
    """Move unblocked vertices to their parents, largest number first."""
    edges = c.edges
    cov = set()
    for w in edges:
        cov.add(w)
        cov.add(tree.parent[w])
    vs = set(c.vertices)
    while True:
        occupied = cov | vs
        moved = False
        for v in sorted(vs, reverse=True):
            if v != 0 and tree.parent[v] not in occupied:
                vs.remove(v)
                vs.add(tree.parent[v])
                moved = True
                break
        if not moved:
            return Cell(edges, tuple(sorted(vs)))


def blocked_representative(tree: PlanarTree, phi: CloudPicture, start: Cell | None = None) -> Cell:
    """A cell of the class with every vertex blocked (the cell r(phi))."""
    c = start if start is not None else representative(tree, phi)
    if class_of(tree, c) != phi:
        raise PictureError("start cell is not in the class")
    out = _slide(tree, c)
    assert class_of(tree, out) == phi
    return out


def blocked_members(tree: PlanarTree, phi: CloudPicture) -> Iterator[Cell]:
    """Every all-blocked cell of the class (small instances only)."""
    for c in member_cells(tree, phi):
        cov = set(c.vertices)
        for w in c.edges:
            cov.update((w, tree.parent[w]))
        if all(v == 0 or tree.parent[v] in cov for v in c.vertices):
            yield c


def bad_edges(tree: PlanarTree, phi: CloudPicture) -> tuple[int, ...]:
    r = blocked_representative(tree, phi)
    return tuple(w for w in phi.edges if is_order_respecting(tree, w, r))


def is_critical(tree: PlanarTree, phi: CloudPicture) -> bool:
    return not bad_edges(tree, phi)


def special_vertices(tree: PlanarTree, phi: CloudPicture) -> set[int]:
    return {tree.parent[w] for w in phi.edges}


def depth(tree: PlanarTree, phi: CloudPicture) -> int:
    """Total vertex depth: special vertices above each vertex, summed.

    Only vertex members count.  A cloud hangs below its least vertex, so the
    depth is constant on a cloud.
    """
    sp = special_vertices(tree, phi)
    total = 0
    for cl, k in zip(phi.clouds, phi.counts):
        if k:
            total += k * sum(1 for u in tree.ancestors(cl[0]) if u in sp)
    return total


def rank(tree: PlanarTree, phi: CloudPicture) -> Rank:
    return Rank(-depth(tree, phi), len(bad_edges(tree, phi)))


def critical_pictures(tree: PlanarTree, n: int, dim: int) -> list[CloudPicture]:
    return [p for p in enumerate_pictures(tree, n, dim) if is_critical(tree, p)]


def support_size(phi: CloudPicture) -> int:
    from math import comb

    out = 1
    for cl, k in zip(phi.clouds, phi.counts):
        out *= comb(len(cl), k)
    return out


def expand(tree: PlanarTree, s: FormalSum | CloudPicture) -> FormalSum:
    """Sum of pictures -> cochain as a sum of cells (small instances)."""
    if isinstance(s, CloudPicture):
        s = FormalSum({s: 1})
    out = FormalSum()
    for phi, a in s.items():
        for c in member_cells(tree, phi):
            out.add(c, a)
    return out


# --- array level --------------------------------------------------------------------------


def _edge_index(X: UDComplex, dim: int):
    cache = X.__dict__.setdefault("_edge_index", {})
    if dim not in cache:
        st = X.states(dim)
        ek = (st == 2).astype(np.int64) @ X.pow3
        order = np.argsort(ek, kind="stable")
        cache[dim] = (ek[order], order)
    return cache[dim]


def support_indices(X: UDComplex, phi: CloudPicture) -> np.ndarray:
    """Indices (into X.states(dim)) of the cells of the class phi."""
    ek, order = _edge_index(X, phi.dim)
    key = int(sum(int(X.pow3[w]) for w in phi.edges))
    lo, hi = np.searchsorted(ek, key, "left"), np.searchsorted(ek, key, "right")
    rows = order[lo:hi]
    if not len(rows):
        return rows
    N = X.tree.num_vertices
    onehot = np.zeros((N, len(phi.clouds)), dtype=np.int64)
    for j, cl in enumerate(phi.clouds):
        onehot[list(cl), j] = 1
    cnt = (X.states(phi.dim)[rows] == 1).astype(np.int64) @ onehot
    ok = (cnt == np.array(phi.counts, dtype=np.int64)).all(axis=1)
    return np.sort(rows[ok])


def cochain_vector(X: UDComplex, s: FormalSum | CloudPicture, dim: int | None = None) -> np.ndarray:
    """Dense integer vector over the dim-cells for a sum of pictures."""
    if isinstance(s, CloudPicture):
        s = FormalSum({s: 1})
    if dim is None:
        dims = {p.dim for p in s}
        if len(dims) != 1:
            raise PictureError("cannot infer the dimension of an empty or mixed sum")
        dim = dims.pop()
    v = np.zeros(X.size(dim), dtype=np.int64)
    for phi, a in s.items():
        if phi.dim != dim:
            raise PictureError("mixed-dimension sum")
        v[support_indices(X, phi)] += a
    return v


def cells_vector(X: UDComplex, s: FormalSum, dim: int) -> np.ndarray:
    v = np.zeros(X.size(dim), dtype=np.int64)
    for c, a in s.items():
        v[X.index_of(c)] += a
    return v
