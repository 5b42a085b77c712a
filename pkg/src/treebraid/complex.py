"""Array-level view of UD^n T: cell tables, keys and boundary matrices."""
from __future__ import annotations

from functools import cached_property

import numpy as np
import scipy.sparse as sp

from . import kernels
from .cells import Cell, cell_state, cell_states, powers_of_three, state_to_cell
from .tree import PlanarTree


class UDComplex:
    """Cell tables of UD^n T, one per dimension, sorted by base-3 key."""

    def __init__(self, tree: PlanarTree, n: int):
        self.tree = tree
        self.n = n
        self.pow3 = powers_of_three(tree.num_vertices)
        self.parent = np.array(tree.parent, dtype=np.int64)
        self.parent[0] = 0
        ptr = [0]
        idx: list[int] = []
        for v in range(tree.num_vertices):
            idx.extend(tree.children[v])
            ptr.append(len(idx))
        self.child_ptr = np.array(ptr, dtype=np.int64)
        self.child_idx = np.array(idx, dtype=np.int64)
        self._states: dict[int, np.ndarray] = {}
        self._keys: dict[int, np.ndarray] = {}

    @cached_property
    def top_dim(self) -> int:
        d = 0
        while d < self.n and len(self.states(d + 1)):
            d += 1
        return d

    def states(self, dim: int) -> np.ndarray:
        if dim < 0 or dim > self.n:
            return np.zeros((0, self.tree.num_vertices), dtype=np.uint8)
        if dim not in self._states:
            st = cell_states(self.tree, self.n, dim)
            keys = st.astype(np.int64) @ self.pow3
            order = np.argsort(keys, kind="stable")
            self._states[dim] = np.ascontiguousarray(st[order])
            self._keys[dim] = keys[order]
        return self._states[dim]

    def keys(self, dim: int) -> np.ndarray:
        self.states(dim)
        return self._keys.get(dim, np.zeros(0, dtype=np.int64))

    def size(self, dim: int) -> int:
        return len(self.states(dim))

    def sizes(self) -> list[int]:
        return [self.size(d) for d in range(self.n + 1)]

    def index_of(self, c: Cell) -> int:
        key = int(cell_state(self.tree, c).astype(np.int64) @ self.pow3)
        keys = self.keys(c.dim)
        i = int(np.searchsorted(keys, key))
        if i >= len(keys) or keys[i] != key:
            raise KeyError(c)
        return i

    def cell(self, dim: int, i: int) -> Cell:
        return state_to_cell(self.tree, self.states(dim)[i])

    def classify(self, dim: int) -> tuple[np.ndarray, np.ndarray]:
        return kernels.classify_states(self.states(dim), self.parent, self.child_ptr, self.child_idx)

    def boundary_matrix(self, dim: int) -> sp.csc_matrix:
        """Matrix of the boundary C_dim -> C_{dim-1} (rows faces, cols cells)."""
        rows_n, cols_n = self.size(dim - 1), self.size(dim)
        if dim <= 0 or cols_n == 0:
            return sp.csc_matrix((max(rows_n, 0), cols_n), dtype=np.int64)
        r, c, v = kernels.boundary_coo(self.states(dim), self.keys(dim - 1), self.parent, self.pow3)
        return sp.csc_matrix((v.astype(np.int64), (r, c)), shape=(rows_n, cols_n))
