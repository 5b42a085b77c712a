"""Cloud pictures: canonical representatives of cell equivalence classes.

Two cells are equivalent when they have the same edges and put the same
number of vertices into each component of T minus those (closed) edges.  A
picture is the edge tuple (ordered by initial vertex), the components
("clouds", as vertex tuples ordered by least vertex) and a count per cloud.
The same object is used for the standard cocycle of the class.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .cells import Cell
from .tree import PlanarTree, TreeError


class PictureError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class CloudPicture:
    edges: tuple[int, ...]
    clouds: tuple[tuple[int, ...], ...]
    counts: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.edges)

    @property
    def n(self) -> int:
        return len(self.edges) + sum(self.counts)

    def count_at(self, v: int) -> int:
        """Count of the cloud containing vertex v (KeyError if v is covered)."""
        for cl, k in zip(self.clouds, self.counts):
            if v in cl:
                return k
        raise KeyError(v)

    def cloud_index(self, v: int) -> int:
        for j, cl in enumerate(self.clouds):
            if v in cl:
                return j
        return -1


# --- components ---------------------------------------------------------------------


@lru_cache(maxsize=65536)
def _components_cached(tree: PlanarTree, edges: frozenset) -> tuple[tuple[int, ...], ...]:
    cov = set()
    for w in edges:
        cov.add(w)
        cov.add(tree.parent[w])
    root_of: dict[int, int] = {}
    groups: dict[int, list[int]] = {}
    # ids are a DFS preorder, so a parent is always seen before its children
    for v in range(tree.num_vertices):
        if v in cov:
            continue
        p = tree.parent[v]
        r = root_of[p] if (v != 0 and p not in cov) else v
        root_of[v] = r
        groups.setdefault(r, []).append(v)
    return tuple(tuple(g) for _, g in sorted(groups.items()))


def components(tree: PlanarTree, edges: Iterable[int]) -> tuple[tuple[int, ...], ...]:
    """Vertex sets of the components of T minus the closed edges."""
    return _components_cached(tree, frozenset(edges))


def sort_edges(tree: PlanarTree, edges: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(edges, key=lambda w: tree.parent[w]))


def edges_disjoint(tree: PlanarTree, edges: Sequence[int]) -> bool:
    seen: set[int] = set()
    for w in edges:
        for x in (tree.parent[w], w):
            if x in seen:
                return False
            seen.add(x)
    return True


def make_picture(tree: PlanarTree, edges: Iterable[int], counts_at: dict[int, int] | Sequence[int]) -> CloudPicture:
    """Build a picture from edges and counts.

    ``counts_at`` is either a full count sequence in canonical cloud order or
    a map {any vertex of the cloud: count}; clouds not mentioned get 0.
    """
    edges = sort_edges(tree, edges)
    if len(set(edges)) != len(edges) or not edges_disjoint(tree, edges):
        raise PictureError("edges of a picture must have disjoint closures")
    for w in edges:
        if not 0 < w < tree.num_vertices:
            raise PictureError(f"{w} is not an edge")
    clouds = components(tree, edges)
    if isinstance(counts_at, dict):
        counts = [0] * len(clouds)
        for v, k in counts_at.items():
            j = next((i for i, cl in enumerate(clouds) if v in cl), -1)
            if j < 0:
                raise PictureError(f"vertex {tree.names[v]} lies on an edge of the picture")
            counts[j] += k
    else:
        counts = list(counts_at)
        if len(counts) != len(clouds):
            raise PictureError("count vector does not match the clouds")
    for cl, k in zip(clouds, counts):
        if k < 0 or k > len(cl):
            raise PictureError(f"count {k} impossible for a cloud of {len(cl)} vertices")
    return CloudPicture(edges, clouds, tuple(counts))


def class_of(tree: PlanarTree, c: Cell) -> CloudPicture:
    clouds = components(tree, c.edges)
    vs = set(c.vertices)
    counts = tuple(sum(1 for v in cl if v in vs) for cl in clouds)
    return CloudPicture(sort_edges(tree, c.edges), clouds, counts)


def zero_picture(tree: PlanarTree, n: int) -> CloudPicture:
    return make_picture(tree, (), [n])


# --- order structure ------------------------------------------------------------------


def break_edge(tree: PlanarTree, phi: CloudPicture, e: int) -> CloudPicture:
    """Remove e and merge the clouds it touched; the merged count gains 1."""
    if e not in phi.edges:
        raise PictureError(f"edge {tree.edge_name(e)} is not in the picture")
    edges = tuple(w for w in phi.edges if w != e)
    clouds = components(tree, edges)
    where = {}
    for j, cl in enumerate(clouds):
        for v in cl:
            where[v] = j
    counts = [0] * len(clouds)
    for cl, k in zip(phi.clouds, phi.counts):
        counts[where[cl[0]]] += k
    counts[where[e]] += 1
    return CloudPicture(edges, clouds, tuple(counts))


def le(tree: PlanarTree, a: CloudPicture, b: CloudPicture) -> bool:
    """a <= b: a arises from b by replacing some edges with endpoints."""
    if not set(a.edges) <= set(b.edges) or a.n != b.n:
        return False
    x = b
    for e in b.edges:
        if e not in a.edges:
            x = break_edge(tree, x, e)
    return x == a


def one_classes_below(tree: PlanarTree, phi: CloudPicture) -> list[CloudPicture]:
    """The 1-classes below phi, one per edge (in phi's edge order)."""
    out = []
    for keep in phi.edges:
        x = phi
        for e in phi.edges:
            if e != keep:
                x = break_edge(tree, x, e)
        out.append(x)
    return out


def lub(tree: PlanarTree, gens: Sequence[CloudPicture]) -> CloudPicture | None:
    """Least upper bound of 1-classes, or None if they have no upper bound.

    The counts g(D) on the components D of T minus all the edges are fixed by
    the linear system  sum_{D in C} g(D) + #(other edges inside C) = f_i(C)
    over every cloud C of every input i.  The system is solved by peeling
    equations with a single unknown left; a leftover is solved exactly.
    """
    gens = list(gens)
    if not gens:
        raise PictureError("lub of an empty family")
    n = gens[0].n
    if any(g.dim != 1 for g in gens):
        raise PictureError("lub takes 1-classes")
    if any(g.n != n for g in gens):
        return None
    if len(gens) == 1:
        return gens[0]
    edges = [g.edges[0] for g in gens]
    if len(set(edges)) != len(edges) or not edges_disjoint(tree, edges):
        return None
    edges_t = sort_edges(tree, edges)
    comps = components(tree, edges_t)
    where = {}
    for j, cl in enumerate(comps):
        for v in cl:
            where[v] = j
    rows: list[tuple[list[int], int]] = []
    for g, e in zip(gens, edges):
        for cl, k in zip(g.clouds, g.counts):
            cs = set(cl)
            inside = sum(1 for w in edges if w != e and w in cs)
            rows.append((sorted({where[v] for v in cl if v in where}), k - inside))
    rows.append((list(range(len(comps))), n - len(edges)))
    sol = _solve_counts(len(comps), rows)
    if sol is None:
        return None
    for cl, k in zip(comps, sol):
        if k < 0 or k > len(cl):
            return None
    return CloudPicture(edges_t, comps, tuple(sol))


def _solve_counts(m: int, rows: list[tuple[list[int], int]]) -> list[int] | None:
    val: list[int | None] = [None] * m
    changed = True
    while changed:
        changed = False
        for idx, rhs in rows:
            unknown = [j for j in idx if val[j] is None]
            if len(unknown) == 1:
                val[unknown[0]] = rhs - sum(val[j] for j in idx if val[j] is not None)
                changed = True
    if any(v is None for v in val):
        sol = _exact_unique_solution(m, rows)
        if sol is None:
            return None
        val = sol
    for idx, rhs in rows:
        if sum(val[j] for j in idx) != rhs:
            return None
    return [int(v) for v in val]


def _exact_unique_solution(m, rows):
    """Gauss-Jordan over Q; None if inconsistent or not an integer point."""
    A = [[Fraction(0)] * m + [Fraction(rhs)] for _, rhs in rows]
    for r, (idx, _) in enumerate(rows):
        for j in idx:
            A[r][j] = Fraction(1)
    piv_cols = []
    r = 0
    for col in range(m):
        p = next((i for i in range(r, len(A)) if A[i][col] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        pv = A[r][col]
        A[r] = [x / pv for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][col] != 0:
                f = A[i][col]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        piv_cols.append(col)
        r += 1
    if any(all(x == 0 for x in row[:m]) and row[m] != 0 for row in A):
        return None
    # uniqueness of least upper bounds: the system is always determined
    assert len(piv_cols) == m, "count system for a least upper bound is underdetermined"
    out = [A[i][m] for i in range(m)]
    if any(x.denominator != 1 for x in out):
        return None
    return [int(x) for x in out]


# --- enumeration ----------------------------------------------------------------------


def _compositions(total: int, caps: Sequence[int]) -> Iterator[tuple[int, ...]]:
    if not caps:
        if total == 0:
            yield ()
        return
    head, rest = caps[0], caps[1:]
    room = sum(rest)
    for k in range(max(0, total - room), min(head, total) + 1):
        for tail in _compositions(total - k, rest):
            yield (k,) + tail


def enumerate_pictures(tree: PlanarTree, n: int, dim: int) -> Iterator[CloudPicture]:
    """Every dim-dimensional picture (equivalence class of dim-cells)."""
    from .cells import disjoint_edge_sets

    for es in disjoint_edge_sets(tree, dim):
        es = sort_edges(tree, es)
        clouds = components(tree, es)
        for counts in _compositions(n - dim, [len(c) for c in clouds]):
            yield CloudPicture(es, clouds, counts)


def representative(tree: PlanarTree, phi: CloudPicture) -> Cell:
    """Some cell of the class: lowest-numbered vertices in each cloud."""
    vs = []
    for cl, k in zip(phi.clouds, phi.counts):
        vs.extend(cl[:k])
    return Cell(phi.edges, tuple(sorted(vs)))


def member_cells(tree: PlanarTree, phi: CloudPicture) -> Iterator[Cell]:
    """All cells of the class (the support of the standard cocycle)."""
    def rec(j):
        if j == len(phi.clouds):
            yield ()
            return
        for pick in combinations(phi.clouds[j], phi.counts[j]):
            for tail in rec(j + 1):
                yield pick + tail

    for vs in rec(0):
        yield Cell(phi.edges, tuple(sorted(vs)))


# --- simplicial complex K ---------------------------------------------------------------


@dataclass
class SimplicialK:
    vertices: list[CloudPicture]
    simplices: dict[int, list[tuple[int, ...]]]  # dimension -> index tuples

    def is_simplex(self, idx: Iterable[int]) -> bool:
        idx = tuple(sorted(idx))
        if len(idx) <= 1:
            return True
        return idx in set(self.simplices.get(len(idx) - 1, ()))


def build_K(tree: PlanarTree, n: int, max_dim: int | None = None,
            vertices: Sequence[CloudPicture] | None = None) -> SimplicialK:
    """Simplices = sets of 1-classes with a least upper bound.

    Grown level by level: a set can only be a simplex if all its facets are.
    """
    V = list(vertices) if vertices is not None else list(enumerate_pictures(tree, n, 1))
    top = n - 1 if max_dim is None else max_dim
    simp: dict[int, list[tuple[int, ...]]] = {0: [(i,) for i in range(len(V))]}
    prev = set(simp[0])
    for d in range(1, top + 1):
        cur = []
        for s in sorted(prev):
            for j in range(s[-1] + 1, len(V)):
                t = s + (j,)
                if any(t[:i] + t[i + 1:] not in prev for i in range(len(t) - 1)):
                    continue
                if lub(tree, [V[i] for i in t]) is not None:
                    cur.append(t)
        if not cur:
            break
        simp[d] = cur
        prev = set(cur)
    return SimplicialK(V, simp)


# --- names --------------------------------------------------------------------------------


def picture_name(tree: PlanarTree, phi: CloudPicture) -> str:
    es = ", ".join("e" + tree.edge_name(w) for w in phi.edges)
    cs = ", ".join(f"C{tree.names[cl[0]]}:{k}" for cl, k in zip(phi.clouds, phi.counts))
    return f"[{es} | {cs}]" if es else f"[| {cs}]"


_NAME_RE = re.compile(r"\[\s*([^|\]]*)\|\s*([^\]]*)\]")
_TUPLE_RE = re.compile(r"\(\s*([A-Za-z0-9_*]+)\s*((?:,\s*~?\s*\d+\s*)+)\)")


def parse_picture(tree: PlanarTree, text: str, n: int | None = None) -> CloudPicture:
    """Parse ``[eA>B | Cm:k, ...]`` or a bar tuple ``(B,1,2,~1,0)``."""
    s = text.strip()
    try:
        if s.startswith("("):
            return _parse_bar_tuple(tree, s, n)
        m = _NAME_RE.fullmatch(s)
        if not m:
            raise PictureError(f"cannot parse picture {text!r}; expected [eA>B | Cm:k, ...]")
        es_txt, cs_txt = m.groups()
        edges = []
        for tok in filter(None, (t.strip() for t in es_txt.split(","))):
            if not tok.startswith("e"):
                raise PictureError(f"edge token must look like eA>B: {tok!r}")
            edges.append(tree.edge_by_name(tok[1:]))
        counts: dict[int, int] = {}
        for tok in filter(None, (t.strip() for t in cs_txt.split(","))):
            if not tok.startswith("C") or ":" not in tok:
                raise PictureError(f"cloud token must look like Cm:k: {tok!r}")
            nm, k = tok[1:].rsplit(":", 1)
            counts[tree.vertex(nm.strip())] = int(k)
        phi = make_picture(tree, edges, counts)
    except TreeError as exc:
        raise PictureError(str(exc)) from None
    for v in counts:
        if phi.clouds[phi.cloud_index(v)][0] != v:
            raise PictureError(f"cloud keys must be least vertices; {tree.names[v]} is not")
    if n is not None and phi.n != n:
        raise PictureError(f"picture has {phi.n} strands, expected {n}")
    return phi


def _parse_bar_tuple(tree: PlanarTree, s: str, n: int | None) -> CloudPicture:
    m = _TUPLE_RE.fullmatch(s)
    if not m:
        raise PictureError(f"bad bar tuple {s!r}; expected (V,a0,a1,~a2,...)")
    v = tree.vertex(m.group(1))
    entries = [t.strip() for t in m.group(2).split(",")[1:]]
    bars = [i for i, t in enumerate(entries) if t.startswith("~")]
    if len(bars) != 1:
        raise PictureError("exactly one entry must carry the bar '~'")
    vals = [int(t.lstrip("~").strip()) for t in entries]
    if len(vals) != tree.degree(v):
        raise PictureError(f"{tree.names[v]} has degree {tree.degree(v)}, got {len(vals)} entries")
    k = bars[0]
    if k == 0:
        raise PictureError("the barred edge must point away from the basepoint")
    tau = tree.neighbor_in_direction(v, k)
    if tree.degree(tau) > 2:
        raise PictureError("bar tuples need a degree-2 terminal vertex")
    clouds = components(tree, (tau,))
    counts = [0] * len(clouds)
    for j, cl in enumerate(clouds):
        d = tree.direction(v, cl[0])
        counts[j] = vals[d] - (1 if d == k else 0)
    phi = make_picture(tree, (tau,), counts)
    if n is not None and phi.n != n:
        raise PictureError(f"bar tuple gives {phi.n} strands, expected {n}")
    return phi


def bar_tuple(tree: PlanarTree, phi: CloudPicture) -> str | None:
    """Bar-tuple text of a 1-class whose terminal vertex has degree 2."""
    if phi.dim != 1:
        return None
    e = phi.edges[0]
    v = tree.parent[e]
    if tree.degree(e) > 2 or v == 0:
        return None
    vals = [0] * tree.degree(v)
    for cl, k in zip(phi.clouds, phi.counts):
        vals[tree.direction(v, cl[0])] += k
    k = tree.direction(v, e)
    vals[k] += 1
    parts = [("~" if i == k else "") + str(x) for i, x in enumerate(vals)]
    return f"({tree.names[v]}," + ",".join(parts) + ")"
