"""Cells of the discretized configuration space UD^n T and their boundaries."""
from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterator

import numpy as np

from .sums import FormalSum
from .tree import PlanarTree, TreeError


class CellError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Cell:
    """An unordered configuration of vertices and closed edges.

    ``edges`` holds terminal vertices, ordered by initial vertex (the order
    that fixes the cube orientation); ``vertices`` is sorted.
    """

    edges: tuple[int, ...]
    vertices: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.edges) + len(self.vertices)

    @property
    def dim(self) -> int:
        return len(self.edges)

    def members(self, tree: PlanarTree) -> list[tuple[int, str, int]]:
        """(number, kind, id) for each member; an edge is numbered by its tau."""
        out = [(v, "v", v) for v in self.vertices] + [(w, "e", w) for w in self.edges]
        out.sort()
        return out


def make_cell(tree: PlanarTree, vertices, edges) -> Cell:
    """Canonicalize and validate (closures pairwise disjoint)."""
    edges = sorted(set(edges), key=lambda w: tree.parent[w])
    vertices = tuple(sorted(set(vertices)))
    used: set[int] = set()
    for w in edges:
        if w <= 0 or w >= tree.num_vertices:
            raise CellError(f"{w} is not an edge")
        for x in (tree.parent[w], w):
            if x in used:
                raise CellError("closures of cell members intersect")
            used.add(x)
    for v in vertices:
        if v in used:
            raise CellError("closures of cell members intersect")
        used.add(v)
    return Cell(tuple(edges), vertices)


def covered(tree: PlanarTree, c: Cell) -> set[int]:
    """Vertices lying in the closure of some member of c."""
    out = set(c.vertices)
    for w in c.edges:
        out.add(w)
        out.add(tree.parent[w])
    return out


# --- enumeration --------------------------------------------------------------


def disjoint_edge_sets(tree: PlanarTree, k: int) -> Iterator[tuple[int, ...]]:
    """Pairwise closure-disjoint k-sets of edges, lexicographic in (iota, tau)."""
    order = sorted(range(1, tree.num_vertices), key=lambda w: (tree.parent[w], w))

    def rec(start: int, chosen: list[int], used: set[int]):
        if len(chosen) == k:
            yield tuple(chosen)
            return
        for j in range(start, len(order)):
            w = order[j]
            p = tree.parent[w]
            if p in used or w in used:
                continue
            chosen.append(w)
            used.add(p)
            used.add(w)
            yield from rec(j + 1, chosen, used)
            chosen.pop()
            used.discard(p)
            used.discard(w)

    yield from rec(0, [], set())


def enumerate_cells(tree: PlanarTree, n: int, dim: int) -> Iterator[Cell]:
    """Stream every dim-cell once, ordered by edge list then vertex list."""
    if not 0 <= dim <= n:
        raise CellError(f"dimension {dim} out of range 0..{n}")
    for es in disjoint_edge_sets(tree, dim):
        blocked = {tree.parent[w] for w in es} | set(es)
        free = [v for v in range(tree.num_vertices) if v not in blocked]
        for vs in combinations(free, n - dim):
            yield Cell(es, vs)


def count_cells(tree: PlanarTree, n: int, dim: int) -> int:
    return sum(
        comb(tree.num_vertices - 2 * dim, n - dim) for _ in disjoint_edge_sets(tree, dim)
    )


# --- boundary / coboundary ------------------------------------------------------


def face(tree: PlanarTree, c: Cell, tau: int, at_iota: bool) -> Cell:
    """Replace the edge ``tau`` of c by one of its endpoints."""
    v = tree.parent[tau] if at_iota else tau
    edges = tuple(w for w in c.edges if w != tau)
    return Cell(edges, tuple(sorted(c.vertices + (v,))))


def boundary(tree: PlanarTree, c: Cell) -> FormalSum:
    """sum_i (-1)^i (c_iota(e_i) - c_tau(e_i)), edges ordered by iota."""
    out = FormalSum()
    for i, w in enumerate(c.edges, start=1):
        s = -1 if i % 2 else 1
        out.add(face(tree, c, w, True), s)
        out.add(face(tree, c, w, False), -s)
    return out


def incidence(tree: PlanarTree, big: Cell, tau: int, at_iota: bool) -> int:
    """Coefficient of the face ``big`` minus edge ``tau`` in the boundary of big."""
    i = big.edges.index(tau) + 1
    s = -1 if i % 2 else 1
    return s if at_iota else -s


def cofaces(tree: PlanarTree, c: Cell) -> Iterator[tuple[Cell, int]]:
    """Cells having c as a codimension-one face, with incidence numbers."""
    cov = covered(tree, c)
    for v in c.vertices:
        rest = tuple(u for u in c.vertices if u != v)
        # v as initial vertex: edge to a child
        for w in tree.children[v]:
            if w in cov:
                continue
            big = Cell(tuple(sorted(c.edges + (w,), key=lambda x: tree.parent[x])), rest)
            yield big, incidence(tree, big, w, True)
        # v as terminal vertex: edge from the parent
        if v != 0:
            p = tree.parent[v]
            if p in cov:
                continue
            big = Cell(tuple(sorted(c.edges + (v,), key=lambda x: tree.parent[x])), rest)
            yield big, incidence(tree, big, v, False)


def coboundary(tree: PlanarTree, phi: FormalSum) -> FormalSum:
    """(delta phi)(c') = phi(boundary c')."""
    dims = {c.dim for c in phi}
    if len(dims) > 1:
        raise CellError("cochain has mixed-dimension support")
    out = FormalSum()
    for c, coef in phi.items():
        for big, inc in cofaces(tree, c):
            out.add(big, coef * inc)
    return out


# --- text form ------------------------------------------------------------------

_TOKEN = re.compile(r"\s*([ve])\s*:\s*([A-Za-z0-9_*]+)(?:\s*>\s*([A-Za-z0-9_*]+))?\s*")


def cell_to_text(tree: PlanarTree, c: Cell) -> str:
    parts = [f"v:{tree.names[v]}" for v in c.vertices]
    parts += [f"e:{tree.edge_name(w)}" for w in c.edges]
    return "{" + ", ".join(parts) + "}"


def parse_cell(tree: PlanarTree, text: str) -> Cell:
    body = text.strip()
    if not (body.startswith("{") and body.endswith("}")):
        raise CellError(f"cell must be written {{v:NAME, e:NAME>NAME, ...}}: {text!r}")
    vertices, edges = [], []
    for tok in filter(None, (t.strip() for t in body[1:-1].split(","))):
        m = _TOKEN.fullmatch(tok)
        if not m:
            raise CellError(f"bad cell member {tok!r}")
        kind, a, b = m.groups()
        try:
            if kind == "v":
                if b is not None:
                    raise CellError(f"vertex member with an arrow: {tok!r}")
                vertices.append(tree.vertex(a))
            else:
                if b is None:
                    raise CellError(f"edge member needs NAME>NAME: {tok!r}")
                edges.append(tree.edge_by_name(f"{a}>{b}"))
        except TreeError as exc:
            raise CellError(str(exc)) from None
    return make_cell(tree, vertices, edges)


# --- array encoding ---------------------------------------------------------------
# state[v] = 0 free, 1 vertex of the cell, 2 the edge (parent[v], v) is in the cell

MAX_KEY_VERTICES = 39  # 3**39 < 2**63


def cell_state(tree: PlanarTree, c: Cell) -> np.ndarray:
    s = np.zeros(tree.num_vertices, dtype=np.uint8)
    s[list(c.vertices)] = 1
    s[list(c.edges)] = 2
    return s


def state_to_cell(tree: PlanarTree, s: np.ndarray) -> Cell:
    vs = tuple(int(v) for v in np.flatnonzero(s == 1))
    es = tuple(sorted((int(w) for w in np.flatnonzero(s == 2)), key=lambda w: tree.parent[w]))
    return Cell(es, vs)


def cell_states(tree: PlanarTree, n: int, dim: int) -> np.ndarray:
    """All dim-cells as a (m, N) uint8 state array, canonical order."""
    N = tree.num_vertices
    blocks = []
    for es in disjoint_edge_sets(tree, dim):
        blocked = {tree.parent[w] for w in es} | set(es)
        free = np.array([v for v in range(N) if v not in blocked], dtype=np.int64)
        k = n - dim
        if k > len(free):
            continue
        if k:
            idx = np.array(list(combinations(range(len(free)), k)), dtype=np.int64)
        else:
            idx = np.zeros((1, 0), dtype=np.int64)
        block = np.zeros((len(idx), N), dtype=np.uint8)
        if k:
            rows = np.repeat(np.arange(len(idx)), k)
            block[rows, free[idx].ravel()] = 1
        block[:, list(es)] = 2
        blocks.append(block)
    if not blocks:
        return np.zeros((0, N), dtype=np.uint8)
    return np.concatenate(blocks)


def powers_of_three(N: int) -> np.ndarray:
    if N > MAX_KEY_VERTICES:
        raise CellError(f"array keys support at most {MAX_KEY_VERTICES} vertices, got {N}")
    return 3 ** np.arange(N, dtype=np.int64)
