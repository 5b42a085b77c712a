"""Cup products in the critical basis, the presentation Lambda[K]/I, and the I' probe."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .clouds import CloudPicture, enumerate_pictures, lub, one_classes_below, picture_name
from .cocycles import bad_edges, is_critical
from .morse import betti as morse_betti
from .rewrite import build_R, build_Rprime, coboundary_pictures, rewrite_to_critical
from .sums import FormalSum
from .tree import PlanarTree


def permutation_sign(seq: Sequence) -> int:
    """Parity of the permutation sorting seq (distinct keys)."""
    s = 1
    a = list(seq)
    for i in range(len(a)):
        for j in range(i + 1, len(a)):
            if a[i] > a[j]:
                s = -s
    return s


def multiply(tree: PlanarTree, gens: Sequence[CloudPicture], with_certificate: bool = False):
    """Product of 1-classes, rewritten in the critical basis."""
    gens = list(gens)
    if len(set(gens)) != len(gens):
        return (FormalSum(), None) if with_certificate else FormalSum()
    top = lub(tree, gens)
    if top is None:
        return (FormalSum(), None) if with_certificate else FormalSum()
    sign = permutation_sign([tree.parent[g.edges[0]] for g in gens])
    res = rewrite_to_critical(tree, FormalSum({top: sign}))
    return (res.critical, res) if with_certificate else res.critical


def monomial(tree: PlanarTree, phi: CloudPicture) -> tuple[CloudPicture, ...]:
    """Generators whose product (in initial-vertex order) is the class phi."""
    return tuple(one_classes_below(tree, phi))


# --- presentation -------------------------------------------------------------------------


@dataclass
class Presentation:
    generators: list[CloudPicture]
    critical: list[bool]
    relations: list[FormalSum]  # sums of pictures
    betti: list[int]
    pictures_by_degree: dict[int, list[CloudPicture]] = field(default_factory=dict)

    def to_json(self, tree: PlanarTree) -> dict:
        names = [picture_name(tree, g) for g in self.generators]
        rels = []
        for r in self.relations:
            terms = []
            for p, c in sorted(r.items(), key=lambda kv: kv[0]):
                terms.append({"coef": c, "monomial": [picture_name(tree, g) for g in monomial(tree, p)]})
            rels.append({"terms": terms})
        return {
            "generators": names,
            "critical_generators": [nm for nm, c in zip(names, self.critical) if c],
            "relations": rels,
            "betti": self.betti,
        }


def relations_in_degree(tree: PlanarTree, pics: list[CloudPicture]) -> list[FormalSum]:
    out = []
    for phi in pics:
        for e in phi.edges:
            if tree.degree(e) > 2:
                out.append(coboundary_pictures(tree, build_Rprime(tree, phi, e)))
        for e in bad_edges(tree, phi):
            if tree.degree(e) <= 2:
                out.append(coboundary_pictures(tree, build_R(tree, phi, tree.parent[e])))
    return [r for r in out if r]


def presentation(tree: PlanarTree, n: int, max_degree: int | None = None) -> Presentation:
    top = n if max_degree is None else max_degree
    pics = {d: list(enumerate_pictures(tree, n, d)) for d in range(0, top + 1)}
    gens = pics.get(1, [])
    rels = []
    for d in range(1, top + 1):
        rels.extend(relations_in_degree(tree, pics[d]))
    return Presentation(gens, [is_critical(tree, g) for g in gens], rels,
                        morse_betti(tree, n), pics)


def sparse_rank(rows: list[dict]) -> int:
    """Exact rank over Q of sparse rows {column: int}."""
    pivots: dict = {}  # column -> reduced row with leading entry 1 at that column
    rank = 0
    for r in rows:
        row = {k: Fraction(v) for k, v in r.items() if v}
        while row:
            col = min(row)
            if col in pivots:
                f = row[col]
                for k, v in pivots[col].items():
                    nv = row.get(k, 0) - f * v
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
            else:
                f = row[col]
                pivots[col] = {k: v / f for k, v in row.items()}
                rank += 1
                break
    return rank


def quotient_ranks(tree: PlanarTree, pres: Presentation) -> list[int]:
    """dim of the degree-d part of Lambda[K]/I, d = 0..top."""
    out = []
    for d, pics in sorted(pres.pictures_by_degree.items()):
        if d == 0:
            out.append(len(pics))
            continue
        index = {p: i for i, p in enumerate(pics)}
        rows = [{index[p]: c for p, c in r.items()} for r in pres.relations
                if next(iter(r)).dim == d]
        out.append(len(pics) - sparse_rank(rows))
    return out


# --- conjecture probe ----------------------------------------------------------------------


@dataclass
class ConjectureReport:
    dims: list[int]
    betti: list[int]
    match: list[bool]
    pair_checks: list[dict]

    @property
    def ok(self) -> bool:
        return all(self.match) and all(p["agree"] for p in self.pair_checks)


def surviving_simplices(tree: PlanarTree, gens: list[CloudPicture], max_deg: int) -> dict[int, list[tuple[int, ...]]]:
    """Simplices all of whose faces have a critical least upper bound."""
    good = {1: [(i,) for i, g in enumerate(gens) if is_critical(tree, g)]}
    prev = set(good[1])
    for d in range(2, max_deg + 1):
        cur = []
        for s in sorted(prev):
            for j in range(s[-1] + 1, len(gens)):
                t = s + (j,)
                if any(t[:i] + t[i + 1:] not in prev for i in range(len(t) - 1)):
                    continue
                top = lub(tree, [gens[i] for i in t])
                if top is not None and is_critical(tree, top):
                    cur.append(t)
        good[d] = cur
        prev = set(cur)
        if not cur:
            break
    return good


def conjecture_probe(tree: PlanarTree, n: int, ideal_filter=None) -> ConjectureReport:
    """Graded dims of Lambda[K]/I' against the Betti numbers.

    ``ideal_filter(simplex) -> bool`` can add monomials to I' (for negative
    controls): a True return kills the monomial.
    """
    b = morse_betti(tree, n)
    gens = list(enumerate_pictures(tree, n, 1))
    good = surviving_simplices(tree, gens, max(len(b) - 1, 1) + 1)
    if ideal_filter is not None:
        for d in sorted(good):
            keep = set(good.get(d - 1, [])) if d > 1 else None
            good[d] = [t for t in good[d] if not ideal_filter(t)
                       and (keep is None or all(t[:i] + t[i + 1:] in keep for i in range(len(t))))]
    dims = [1] + [len(good.get(d, [])) for d in range(1, max(len(b), max(good) + 1))]
    while len(dims) > len(b) and dims[-1] == 0:
        dims.pop()
    bb = b + [0] * (len(dims) - len(b))
    match = [x == y for x, y in zip(dims, bb)]
    crit = [i for i, g in enumerate(gens) if is_critical(tree, g)]
    pair_ok = set(good.get(2, []))
    checks = []
    for i, j in combinations(crit, 2):
        prod = multiply(tree, [gens[i], gens[j]])
        predicted = (i, j) in pair_ok
        checks.append({
            "pair": [picture_name(tree, gens[i]), picture_name(tree, gens[j])],
            "product_nonzero": bool(prod),
            "predicted_nonzero": predicted,
            "agree": bool(prod) == predicted,
        })
    return ConjectureReport(dims, bb, match, checks)


# --- product table and product screens ----------------------------------------------------------


def product_table(tree: PlanarTree, gens: list[CloudPicture]) -> dict[tuple[int, int], FormalSum]:
    out = {}
    for i, j in combinations(range(len(gens)), 2):
        p = multiply(tree, [gens[i], gens[j]])
        if p:
            out[(i, j)] = p
    return out


def capacity_holds(tree: PlanarTree, phi: CloudPicture, psi: CloudPicture) -> bool:
    """For every cloud C of phi: f_phi(C) >= sum f_psi(C' in C) + #edges of psi in C."""
    for cl, k in zip(phi.clouds, phi.counts):
        cs = set(cl)
        inside = sum(kk for c2, kk in zip(psi.clouds, psi.counts) if set(c2) <= cs)
        inside += sum(1 for w in psi.edges if w in cs and tree.parent[w] in cs)
        if k < inside:
            return False
    return True


def crowded_cloud_holds(tree: PlanarTree, phi: CloudPicture) -> bool:
    """Some cloud of phi holds an essential vertex and has count >= 2."""
    return any(k >= 2 and any(tree.is_essential(v) for v in cl) for cl, k in zip(phi.clouds, phi.counts))


def multiply_pictures(tree: PlanarTree, p: CloudPicture, q: CloudPicture) -> FormalSum:
    """Product of two standard cocycles, rewritten in the critical basis."""
    gens = list(monomial(tree, p)) + list(monomial(tree, q))
    return multiply(tree, gens)


def multiply_sums(tree: PlanarTree, a: FormalSum, b: FormalSum) -> FormalSum:
    out = FormalSum()
    for p, x in a.items():
        for q, y in b.items():
            out.iadd(multiply_pictures(tree, p, q), x * y)
    return out


def killed_by_lone_relation(tree: PlanarTree, phi: CloudPicture) -> int | None:
    """A bad edge e of phi whose other clouds at iota(e) are all empty, else None.

    For such an edge phi is the only standard cocycle left in delta R, so
    phi is cohomologous to 0.  Only edges with d(tau(e)) <= 2 qualify: R is
    not defined otherwise, and the conclusion can fail there (on Y3 with
    n=3, [ep>c | C*:0, Cl1:0, Cr1:2] is a nonzero class).
    """
    for e in bad_edges(tree, phi):
        if tree.degree(e) > 2:
            continue
        v = tree.parent[e]
        k = tree.direction(v, e)
        if k == 0:
            continue
        ok = True
        for i in range(tree.degree(v)):
            if i == k:
                continue
            w = tree.neighbor_in_direction(v, i)
            j = phi.cloud_index(w) if w is not None else -1
            if j >= 0 and phi.counts[j] > 0:
                ok = False
                break
        if ok:
            return e
    return None
