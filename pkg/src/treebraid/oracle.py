"""Exact ground truth for the cellular chain complex of UD^n T.

The whole complex is assembled as one sparse integer matrix and shrunk by
unit-pivot reductions: first free pairs (no fill-in, compiled kernel), then a
general elimination with fill-in on what is left.  Each reduction pair
(a, b) is a chain homotopy equivalence; cochains are pulled back through the
recorded pairs.  The small final complex is finished with a Smith normal
form.  None of this uses the Morse classification.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
import scipy.sparse as sp

from . import kernels
from .cells import Cell, disjoint_edge_sets
from .clouds import CloudPicture, class_of, one_classes_below
from .complex import UDComplex
from .tree import PlanarTree

DEFAULT_BUDGET = 2_000_000


class OracleBudgetError(RuntimeError):
    pass


class OracleError(RuntimeError):
    pass


def default_budget() -> int:
    raw = os.environ.get("TREEBRAID_BUDGET")
    if raw:
        b = int(raw)
        if b <= 0:
            raise ValueError("TREEBRAID_BUDGET must be positive")
        return b
    return DEFAULT_BUDGET


def _check_budget(total: int, budget: int | None) -> None:
    budget = default_budget() if budget is None else budget
    if total > budget:
        raise OracleBudgetError(f"complex has {total} cells, budget is {budget}")


def assemble(X: UDComplex):
    """Global boundary matrix F[face, cell] in csc form plus dims/offsets."""
    sizes = X.sizes()
    off = np.concatenate([[0], np.cumsum(sizes)]).astype(np.int64)
    M = int(off[-1])
    dims = np.concatenate([np.full(s, d, dtype=np.int64) for d, s in enumerate(sizes)])
    rows, cols, vals = [], [], []
    for d in range(1, X.n + 1):
        if sizes[d] == 0:
            continue
        B = X.boundary_matrix(d).tocoo()
        rows.append(B.row.astype(np.int64) + off[d - 1])
        cols.append(B.col.astype(np.int64) + off[d])
        vals.append(B.data.astype(np.int64))
    if rows:
        F = sp.csc_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(M, M))
    else:
        F = sp.csc_matrix((M, M), dtype=np.int64)
    F.sort_indices()
    return F, dims, off


@dataclass
class ReducedComplex:
    """A chain complex reduced to a small remainder, with the replay data."""

    X: UDComplex
    dims: np.ndarray
    off: np.ndarray
    arrays: tuple  # f_ptr, f_idx, f_val, c_ptr, c_idx, c_val
    time: np.ndarray
    pa: np.ndarray
    pb: np.ndarray
    steps: list = field(default_factory=list)  # (a, b, eps, [(x, c), ...]) after the free pairs
    rem: dict = field(default_factory=dict)  # global id -> {face: coef}

    @classmethod
    def build(cls, X: UDComplex, budget: int | None = None) -> "ReducedComplex":
        _check_budget(sum(X.sizes()), budget)
        F, dims, off = assemble(X)
        C = F.T.tocsc()
        C.sort_indices()
        arrays = tuple(
            a.astype(np.int64) for a in (F.indptr, F.indices, F.data, C.indptr, C.indices, C.data)
        )
        time, pa, pb = kernels.free_pair_reduction(dims, *arrays, 0)
        self = cls(X, dims, off, arrays, time, pa, pb)
        self._eliminate()
        return self

    def _eliminate(self) -> None:
        f_ptr, f_idx, f_val = self.arrays[:3]
        alive = np.flatnonzero(self.time < 0)
        live = set(int(x) for x in alive)
        bd: dict[int, dict[int, int]] = {}
        cob: dict[int, dict[int, int]] = {x: {} for x in live}
        for x in live:
            row = {}
            for j in range(f_ptr[x], f_ptr[x + 1]):
                y = int(f_idx[j])
                if y in live:
                    row[y] = int(f_val[j])
            bd[x] = row
            for y, c in row.items():
                cob[y][x] = c
        progress = True
        while progress:
            progress = False
            for a in sorted(bd, key=lambda z: (len(bd[z]), z)):
                if a not in bd:
                    continue
                units = [y for y, c in bd[a].items() if abs(c) == 1]
                if not units:
                    continue
                b = min(units, key=lambda y: (len(cob[y]), y))
                eps = bd[a][b]
                others = [(x, bd[x][b]) for x in cob[b] if x != a]
                self.steps.append((a, b, eps, others))
                for x, c in others:
                    f = c * eps
                    row = bd[x]
                    for y, v in bd[a].items():
                        nv = row.get(y, 0) - f * v
                        if nv:
                            row[y] = nv
                            cob[y][x] = nv
                        else:
                            row.pop(y, None)
                            cob[y].pop(x, None)
                for y in bd[a]:
                    cob[y].pop(a, None)
                for z in cob[a]:
                    bd[z].pop(a, None)
                for y in bd[b]:
                    cob[y].pop(b, None)
                for z in cob[b]:
                    bd[z].pop(b, None)
                for z in (a, b):
                    del bd[z]
                    del cob[z]
                progress = True
        self.rem = bd

    # --- queries ----------------------------------------------------------------

    def remainder(self, dim: int) -> list[int]:
        return sorted(x for x in self.rem if self.dims[x] == dim)

    def differential_is_zero(self) -> bool:
        return all(not row for row in self.rem.values())

    def boundary_block(self, dim: int) -> np.ndarray:
        """Dense matrix of the remainder boundary from dim to dim-1."""
        cols = self.remainder(dim)
        rows = self.remainder(dim - 1)
        ri = {y: i for i, y in enumerate(rows)}
        A = np.zeros((len(rows), len(cols)), dtype=object)
        for j, x in enumerate(cols):
            for y, c in self.rem[x].items():
                A[ri[y], j] = c
        return A

    def homology(self) -> list[tuple[int, list[int]]]:
        """(rank, torsion coefficients) of H_d for d = 0..n."""
        out = []
        for d in range(self.X.n + 1):
            out.append(_homology_from_blocks(
                len(self.remainder(d)), self.boundary_block(d), self.boundary_block(d + 1)))
        return out

    def pull_back(self, dim: int, vec: np.ndarray) -> np.ndarray:
        """Values of the pulled-back cochain on the remainder dim-cells."""
        phi = np.zeros(len(self.dims), dtype=np.int64)
        phi[self.off[dim]:self.off[dim + 1]] = vec
        kernels.pullback_pairs(phi, dim, self.dims, self.time, self.pa, self.pb, *self.arrays)
        for a, b, eps, others in self.steps:
            if self.dims[a] != dim or phi[a] == 0:
                continue
            pa = phi[a]
            for x, c in others:
                phi[x] -= c * eps * pa
        return phi[self.remainder(dim)]


def _homology_from_blocks(m: int, D_in: np.ndarray, D_out: np.ndarray):
    """H at a spot with m cells, incoming D_out (from above), outgoing D_in."""
    r_in = _rank(D_in)
    inv = _invariant_factors(D_out)
    r_out = len(inv)
    rank = m - r_in - r_out
    return rank, [int(x) for x in inv if abs(x) != 1]


def _rank(A) -> int:
    if A.size == 0 or not np.any(A != 0):
        return 0
    import sympy

    return sympy.Matrix(A.tolist()).rank()


def _invariant_factors(A) -> list[int]:
    if A.size == 0 or not np.any(A != 0):
        return []
    import sympy
    from sympy.matrices.normalforms import smith_normal_form

    S = smith_normal_form(sympy.Matrix(A.tolist()), domain=sympy.ZZ)
    k = min(S.shape)
    return [int(S[i, i]) for i in range(k) if S[i, i] != 0]


# --- public operations ----------------------------------------------------------------


_CACHE: dict = {}


def reduced(tree: PlanarTree, n: int, budget: int | None = None, X: UDComplex | None = None) -> ReducedComplex:
    key = (tree, n)
    rc = _CACHE.get(key)
    if rc is None:
        rc = ReducedComplex.build(X if X is not None else UDComplex(tree, n), budget)
        _CACHE.clear()  # keep one complex alive at a time
        _CACHE[key] = rc
    return rc


def snf_homology(tree: PlanarTree, n: int, budget: int | None = None) -> list[tuple[int, list[int]]]:
    """Integral homology (rank, torsion) in dimensions 0..n."""
    return reduced(tree, n, budget).homology()


def dense_snf_homology(X: UDComplex, budget: int = 5000) -> list[tuple[int, list[int]]]:
    """Textbook route: Smith normal form of every full boundary matrix."""
    _check_budget(sum(X.sizes()), budget)
    out = []
    for d in range(X.n + 1):
        D_in = X.boundary_matrix(d).toarray().astype(object) if d > 0 else np.zeros((0, X.size(0)), dtype=object)
        D_out = X.boundary_matrix(d + 1).toarray().astype(object) if d < X.n else np.zeros((X.size(d), 0), dtype=object)
        out.append(_homology_from_blocks(X.size(d), D_in, D_out))
    return out


def is_coboundary(rc: ReducedComplex, dim: int, vec: np.ndarray) -> bool:
    """Is the integer dim-cochain vec equal to delta of some cochain?

    vec must be a cocycle; it is then a coboundary iff its pullback to the
    remainder lies in the row space of the remainder boundary.  Homology is
    torsion-free here, so the rational test is the integral one.
    """
    if dim < 1:
        raise OracleError("is_coboundary needs dimension >= 1")
    X = rc.X
    B = X.boundary_matrix(dim + 1) if dim < X.n else None
    if B is not None and B.shape[1] and np.any(B.T @ vec):
        return False
    w = rc.pull_back(dim, vec)
    if rc.differential_is_zero():
        return not np.any(w)
    D = rc.boundary_block(dim)  # rows: (dim-1)-cells, cols: dim-cells
    if D.size == 0:
        return not np.any(w)
    import sympy

    M = sympy.Matrix(D.T.tolist()) if D.size else sympy.zeros(len(w), 0)
    return M.rank() == M.row_join(sympy.Matrix([int(x) for x in w])).rank()


def pairing_matrix(rc: ReducedComplex, dim: int, cochains: list[np.ndarray]) -> np.ndarray:
    """Rows: cochains, cols: remainder cells (a homology basis when d = 0)."""
    if not rc.differential_is_zero():
        raise OracleError("remainder has a nonzero differential; no cell basis for homology")
    m = len(rc.remainder(dim))
    if not cochains:
        return np.zeros((0, m), dtype=np.int64)
    return np.array([rc.pull_back(dim, v) for v in cochains], dtype=np.int64).reshape(len(cochains), m)


def pairing_check(rc: ReducedComplex, dim: int, cochains: list[np.ndarray]) -> tuple[bool, np.ndarray]:
    P = pairing_matrix(rc, dim, cochains)
    if P.shape[0] != P.shape[1]:
        return False, P
    if P.shape[0] == 0:
        return True, P
    import sympy

    det = sympy.Matrix(P.tolist()).det()
    return abs(int(det)) == 1, P


def brute_lub(gens: list[CloudPicture], tree: PlanarTree, n: int, budget: int | None = None) -> CloudPicture | None:
    """Scan all |gens|-cells for classes whose 1-classes below are exactly gens."""
    k = len(gens)
    if k == 1:
        return gens[0]
    target = set(gens)
    if len(target) != k:
        return None
    found = set()
    scanned = 0
    budget = default_budget() if budget is None else budget
    # only edge sets made of the generators' edges can qualify
    want = sorted({g.edges[0] for g in gens})
    for es in disjoint_edge_sets(tree, k):
        if sorted(es) != want:
            continue
        blocked = {tree.parent[w] for w in es} | set(es)
        free = [v for v in range(tree.num_vertices) if v not in blocked]
        for vs in combinations(free, n - k):
            scanned += 1
            if scanned > budget:
                raise OracleBudgetError("brute_lub scan exceeded the budget")
            pic = class_of(tree, Cell(tuple(sorted(es, key=lambda w: tree.parent[w])), vs))
            if pic in found:
                continue
            if set(one_classes_below(tree, pic)) == target:
                found.add(pic)
    if not found:
        return None
    if len(found) > 1:
        raise OracleError("several minimal upper bounds found")
    return found.pop()
