"""Relation cochains R and R' and the rank-descent rewriting into critical cocycles.

A relation cochain is written in partition notation: an edge set E_R, a
partition of the vertices off those edges, and a count per part.  Its value
is 1 on cells with edges E_R and exactly that many vertices in each part.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product as iproduct

from .clouds import CloudPicture, _compositions, components, sort_edges
from .cocycles import Rank, bad_edges, is_critical, rank
from .cells import Cell
from .sums import FormalSum
from .tree import PlanarTree


class RewriteError(RuntimeError):
    pass


@dataclass(frozen=True)
class RelationCochain:
    kind: str  # "R" or "Rprime"
    base: CloudPicture
    pivot: int  # special vertex v for R, terminal vertex of the edge e for Rprime
    removed_edge: int
    edges: tuple[int, ...]
    parts: tuple[tuple[int, ...], ...]
    counts: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.edges)


def _parts_from(phi: CloudPicture, merge: dict[int, tuple[set[int], int]]):
    """Clouds of phi, with some replaced per ``merge`` {cloud index: (set, count)}."""
    out = []
    for j, (cl, k) in enumerate(zip(phi.clouds, phi.counts)):
        if j in merge:
            continue
        out.append((tuple(cl), k))
    for s, k in merge.values():
        out.append((tuple(sorted(s)), k))
    out.sort()
    return tuple(p for p, _ in out), tuple(k for _, k in out)


def build_R(tree: PlanarTree, phi: CloudPicture, v: int) -> RelationCochain:
    """R for the special vertex v = iota(e') of phi; needs d(tau(e')) <= 2."""
    ep = next((w for w in phi.edges if tree.parent[w] == v), None)
    if ep is None:
        raise RewriteError(f"{tree.names[v]} is not a special vertex of the picture")
    if tree.degree(ep) > 2:
        raise RewriteError("terminal vertex has degree > 2; normalize with build_Rprime first")
    merge: dict[int, tuple[set[int], int]] = {}
    # cloud beyond tau(e'), if any: tau's only child
    kids = tree.children[ep]
    if kids and phi.cloud_index(kids[0]) >= 0:
        j = phi.cloud_index(kids[0])
        merge[j] = (set(phi.clouds[j]) | {ep}, phi.counts[j] + 1)
    else:
        merge[-1] = ({ep}, 1)
    if v != 0 and phi.cloud_index(tree.parent[v]) >= 0:
        j = phi.cloud_index(tree.parent[v])
        merge[j] = (set(phi.clouds[j]) | {v}, phi.counts[j])
    else:
        merge[-2] = ({v}, 0)
    parts, counts = _parts_from(phi, merge)
    edges = tuple(w for w in phi.edges if w != ep)
    return RelationCochain("R", phi, v, ep, edges, parts, counts)


def build_Rprime(tree: PlanarTree, phi: CloudPicture, e: int) -> RelationCochain:
    """R' for an edge e of phi whose terminal vertex is essential."""
    if e not in phi.edges:
        raise RewriteError("edge is not in the picture")
    if tree.degree(e) < 3:
        raise RewriteError("R' needs an essential terminal vertex")
    iota = tree.parent[e]
    if iota != 0 and tree.degree(iota) > 2:
        raise RewriteError("adjacent essential vertices; subdivide the tree first")
    merge: dict[int, tuple[set[int], int]] = {-1: ({e}, 1)}
    if iota != 0 and phi.cloud_index(tree.parent[iota]) >= 0:
        j = phi.cloud_index(tree.parent[iota])
        merge[j] = (set(phi.clouds[j]) | {iota}, phi.counts[j])
    else:
        merge[-2] = ({iota}, 0)
    parts, counts = _parts_from(phi, merge)
    edges = tuple(w for w in phi.edges if w != e)
    return RelationCochain("Rprime", phi, e, e, edges, parts, counts)


# --- coboundary of a partition cochain ------------------------------------------------------


def _distribute(tree: PlanarTree, edges, part_of: dict[int, int], need: list[int]):
    """Pictures with ``edges`` whose clouds meet the part totals ``need``."""
    clouds = components(tree, edges)
    groups: dict[int, list[int]] = {}
    for j, cl in enumerate(clouds):
        parts = {part_of[u] for u in cl}
        assert len(parts) == 1, "a cloud straddles two parts"
        groups.setdefault(parts.pop(), []).append(j)
    for p, k in enumerate(need):
        if k < 0:
            return
        if p not in groups and k:
            return
    choices = []
    order = sorted(groups)
    for p in order:
        js = groups[p]
        opts = list(_compositions(need[p], [len(clouds[j]) for j in js]))
        if not opts:
            return
        choices.append([(js, o) for o in opts])
    for combo in iproduct(*choices):
        counts = [0] * len(clouds)
        for js, o in combo:
            for j, k in zip(js, o):
                counts[j] = k
        yield CloudPicture(sort_edges(tree, edges), clouds, tuple(counts))


def delta_terms(tree: PlanarTree, R: RelationCochain):
    """Yield (x, position, iota_terms, tau_terms) for every connecting edge x."""
    part_of = {}
    for p, s in enumerate(R.parts):
        for u in s:
            part_of[u] = p
    used = set()
    for w in R.edges:
        used.update((w, tree.parent[w]))
    for x in range(1, tree.num_vertices):
        ix = tree.parent[x]
        if x in used or ix in used:
            continue
        if part_of[x] == part_of[ix]:
            continue
        edges = sort_edges(tree, R.edges + (x,))
        pos = edges.index(x) + 1
        need_i = list(R.counts)
        need_i[part_of[ix]] -= 1  # the face at iota(x) supplies one vertex
        need_t = list(R.counts)
        need_t[part_of[x]] -= 1
        iota_terms = list(_distribute(tree, edges, part_of, need_i))
        tau_terms = list(_distribute(tree, edges, part_of, need_t))
        yield x, pos, iota_terms, tau_terms


def coboundary_pictures(tree: PlanarTree, R: RelationCochain) -> FormalSum:
    """delta R as an exact signed sum of standard cocycles."""
    out = FormalSum()
    for x, pos, it, tt in delta_terms(tree, R):
        s = -1 if pos % 2 else 1
        for p in it:
            out.add(p, s)
        for p in tt:
            out.add(p, -s)
    return out


def delta_decompose(tree: PlanarTree, R: RelationCochain) -> tuple[FormalSum, FormalSum, int]:
    """(Sigma_tau, Sigma_iota, s) with delta R = s * (Sigma_tau - Sigma_iota).

    s is fixed by the position of the removed edge, so the base picture
    enters Sigma_tau with coefficient +1.
    """
    pos_e = sort_edges(tree, R.edges + (R.removed_edge,)).index(R.removed_edge) + 1
    s = 1 if pos_e % 2 else -1  # delta R = (-1)^pos (iota - tau) = s (tau - iota)
    st, si = FormalSum(), FormalSum()
    for x, pos, it, tt in delta_terms(tree, R):
        sx = (1 if pos % 2 else -1) * s  # relative sign of this x
        for p in tt:
            st.add(p, sx)
        for p in it:
            si.add(p, sx)
    return st, si, s


def expand_relation(tree: PlanarTree, R: RelationCochain) -> FormalSum:
    """R as a sum of cells (small instances)."""
    from itertools import combinations

    out = FormalSum()

    def rec(j):
        if j == len(R.parts):
            yield ()
            return
        for pick in combinations(R.parts[j], R.counts[j]):
            for tail in rec(j + 1):
                yield pick + tail

    for vs in rec(0):
        out.add(Cell(R.edges, tuple(sorted(vs))), 1)
    return out


# --- rewriting -------------------------------------------------------------------------------


@dataclass
class RewriteResult:
    critical: FormalSum
    certificate: list[tuple[RelationCochain, int]] = field(default_factory=list)
    ranks: list[Rank] = field(default_factory=list)  # max non-critical rank before each pass


def _needs_prime(tree: PlanarTree, phi: CloudPicture) -> int | None:
    for w in phi.edges:
        if tree.degree(w) > 2:
            return w
    return None


def rewrite_to_critical(tree: PlanarTree, s: FormalSum | CloudPicture, max_iter: int = 100000,
                        rng: random.Random | None = None) -> RewriteResult:
    """Express a sum of standard cocycles through critical ones.

    input - output = sum(m * delta R) over the returned certificate.  With
    ``rng`` the bad edge is picked at random instead of least initial vertex.
    """
    if isinstance(s, CloudPicture):
        s = FormalSum({s: 1})
    s = FormalSum(s)
    if len({p.dim for p in s}) > 1:
        raise RewriteError("all pictures of a sum must have the same dimension")
    res = RewriteResult(FormalSum())
    # (i) move essential terminal vertices out of the way
    guard = 0
    while True:
        todo = [(p, _needs_prime(tree, p)) for p in s]
        todo = [(p, e) for p, e in todo if e is not None]
        if not todo:
            break
        for phi, e in sorted(todo):
            a = s.get(phi, 0)
            if not a:
                continue
            R = build_Rprime(tree, phi, e)
            D = coboundary_pictures(tree, R)
            c = D.get(phi, 0)
            if abs(c) != 1:
                raise RewriteError("base picture does not occur once in delta R'")
            m = a * c
            s.iadd(D, -m)
            assert phi not in s
            res.certificate.append((R, m))
        guard += 1
        if guard > max_iter:
            raise RewriteError("R' normalization did not terminate")
    # (ii) rank descent
    last: Rank | None = None
    for _ in range(max_iter):
        ranked = {p: rank(tree, p) for p in s if not is_critical(tree, p)}
        if not ranked:
            res.critical = s
            return res
        top = max(ranked.values())
        if last is not None and not top < last:
            raise RewriteError(f"rank did not descend: {last} -> {top}")
        res.ranks.append(top)
        last = top
        for phi in sorted(p for p, r in ranked.items() if r == top):
            a = s.get(phi, 0)
            if not a:
                continue
            bad = bad_edges(tree, phi)
            e = rng.choice(bad) if rng is not None else min(bad, key=lambda w: tree.parent[w])
            R = build_R(tree, phi, tree.parent[e])
            D = coboundary_pictures(tree, R)
            c = D.get(phi, 0)
            if abs(c) != 1:
                raise RewriteError("base picture does not occur once in delta R")
            for p in D:
                if p != phi and not is_critical(tree, p) and not rank(tree, p) < top:
                    raise RewriteError("relation term does not have smaller rank")
            m = a * c
            s.iadd(D, -m)
            res.certificate.append((R, m))
    raise RewriteError("rewriting exceeded the iteration budget")


# --- serialization ----------------------------------------------------------------------------


def certificate_json(tree: PlanarTree, cert) -> list[dict]:
    from .clouds import picture_name

    out = []
    for R, m in cert:
        pivot = tree.names[R.pivot] if R.kind == "R" else "e" + tree.edge_name(R.pivot)
        out.append({"kind": R.kind, "base": picture_name(tree, R.base), "pivot": pivot, "multiplier": m})
    return out
