"""Rooted planar trees with the left-first DFS numbering.

Vertex ids *are* the DFS numbers: vertex 0 is the basepoint ``*`` and the
numbering follows the leftmost branch first.  An edge is identified by its
terminal vertex ``tau``; its initial vertex is ``parent[tau]``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

NAME_RE = re.compile(r"[A-Za-z0-9_*]+")


class TreeSyntaxError(ValueError):
    pass


class TreeError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class PlanarTree:
    names: tuple[str, ...]
    parent: tuple[int, ...]
    children: tuple[tuple[int, ...], ...]
    index: dict[str, int] = field(repr=False, compare=False)

    # --- construction -------------------------------------------------------

    @classmethod
    def from_nested(cls, root: str, kids: dict[str, list[str]]) -> "PlanarTree":
        """Build from a root name and an ordered child map (names)."""
        names: list[str] = []
        parent: list[int] = []
        children: list[list[int]] = []
        index: dict[str, int] = {}
        stack = [(root, -1)]
        while stack:
            name, par = stack.pop()
            if name in index:
                raise TreeError(f"duplicate vertex name {name!r}")
            vid = len(names)
            index[name] = vid
            names.append(name)
            parent.append(par)
            children.append([])
            if par >= 0:
                children[par].append(vid)
            # reversed so the leftmost child is numbered first
            for child in reversed(kids.get(name, [])):
                stack.append((child, vid))
        if len(children[0]) != 1:
            raise TreeError("the root * must be a leaf (exactly one child)")
        return cls(
            names=tuple(names),
            parent=tuple(parent),
            children=tuple(tuple(c) for c in children),
            index=index,
        )

    def to_text(self) -> str:
        def emit(v: int) -> str:
            if not self.children[v]:
                return self.names[v]
            return self.names[v] + "(" + ",".join(emit(c) for c in self.children[v]) + ")"

        return emit(0)

    def __eq__(self, other):
        if not isinstance(other, PlanarTree):
            return NotImplemented
        return self.names == other.names and self.parent == other.parent

    def __hash__(self):
        return hash((self.names, self.parent))

    # --- basic queries ------------------------------------------------------

    @property
    def root(self) -> int:
        return 0

    @property
    def num_vertices(self) -> int:
        return len(self.names)

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        """Oriented edges (iota, tau), listed by tau."""
        return tuple((self.parent[w], w) for w in range(1, self.num_vertices))

    def degree(self, v: int) -> int:
        return len(self.children[v]) + (v != 0)

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.array([self.degree(v) for v in range(self.num_vertices)], dtype=np.int64)

    def is_essential(self, v: int) -> bool:
        return self.degree(v) >= 3

    @cached_property
    def subtree_end(self) -> tuple[int, ...]:
        """Subtree of v is the id range [v, subtree_end[v])."""
        end = list(range(1, self.num_vertices + 1))
        for v in range(self.num_vertices - 1, 0, -1):
            p = self.parent[v]
            end[p] = max(end[p], end[v])
        return tuple(end)

    def in_subtree(self, w: int, v: int) -> bool:
        return v <= w < self.subtree_end[v]

    def neighbors(self, v: int) -> list[int]:
        out = list(self.children[v])
        if v != 0:
            out.insert(0, self.parent[v])
        return out

    def adjacent(self, u: int, v: int) -> bool:
        return self.parent[u] == v or self.parent[v] == u

    def direction(self, v: int, w: int) -> int:
        """Direction index of w as seen from v.

        0 means towards the basepoint; k >= 1 means w lies in the subtree of
        the k-th child of v.  From the basepoint itself every vertex lies in
        direction 1.
        """
        if v == w:
            raise TreeError("direction(v, v) is undefined")
        if not self.in_subtree(w, v):
            return 0
        for k, c in enumerate(self.children[v], start=1):
            if self.in_subtree(w, c):
                return k
        raise AssertionError("unreachable")

    def neighbor_in_direction(self, v: int, k: int) -> int | None:
        if k == 0:
            return self.parent[v] if v != 0 else None
        kids = self.children[v]
        return kids[k - 1] if 1 <= k <= len(kids) else None

    def geodesic(self, u: int, w: int) -> list[int]:
        """Vertices on the path from u to w, both ends included."""
        up, down = [u], [w]
        a, b = u, w
        while a != b:
            if a > b:
                a = self.parent[a]
                up.append(a)
            else:
                b = self.parent[b]
                down.append(b)
        down.pop()
        return up + down[::-1]

    def ancestors(self, v: int) -> list[int]:
        """Path from * to v inclusive."""
        out = [v]
        while v != 0:
            v = self.parent[v]
            out.append(v)
        return out[::-1]

    @cached_property
    def essential_vertices(self) -> tuple[int, ...]:
        return tuple(v for v in range(self.num_vertices) if self.is_essential(v))

    def vertex(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise TreeError(f"unknown vertex {name!r}") from None

    def edge_name(self, tau: int) -> str:
        return f"{self.names[self.parent[tau]]}>{self.names[tau]}"

    def edge_by_name(self, text: str) -> int:
        try:
            a, b = (s.strip() for s in text.split(">"))
        except ValueError:
            raise TreeError(f"malformed edge {text!r}; expected NAME>NAME") from None
        ia, ib = self.vertex(a), self.vertex(b)
        if ib == 0 or self.parent[ib] != ia:
            raise TreeError(f"{text!r} is not an oriented tree edge")
        return ib

    # --- subdivision --------------------------------------------------------

    def segments(self) -> list[list[int]]:
        """Maximal paths whose interior vertices have degree 2 (top-down)."""
        out = []
        for v in range(self.num_vertices):
            if v != 0 and self.degree(v) == 2:
                continue
            for c in self.children[v]:
                seg = [v, c]
                while self.degree(seg[-1]) == 2:
                    seg.append(self.children[seg[-1]][0])
                out.append(seg)
        return out

    def is_sufficiently_subdivided(self, n: int) -> bool:
        for seg in self.segments():
            length = len(seg) - 1
            if length < n - 1:
                return False
            if length < 2 and self.is_essential(seg[0]) and self.is_essential(seg[-1]):
                return False
        return True


def subdivide_for(tree: PlanarTree, n: int) -> PlanarTree:
    """Minimal uniform subdivision making ``tree`` sufficient for n strands.

    Every maximal degree-2 segment is stretched to at least n-1 edges, and to
    at least 2 edges when both its ends are essential.  Inserted vertices are
    spread evenly over the segment's original edges.
    """
    if n < 1:
        raise TreeError("n must be >= 1")
    extra_on: dict[int, int] = {}
    for seg in tree.segments():
        length = len(seg) - 1
        target = max(length, n - 1)
        if tree.is_essential(seg[0]) and tree.is_essential(seg[-1]):
            target = max(target, 2)
        extra = target - length
        for j, tau in enumerate(seg[1:]):
            extra_on[tau] = extra // length + (1 if j < extra % length else 0)
    if not any(extra_on.values()):
        return tree

    used = set(tree.names)
    kids: dict[str, list[str]] = {}
    for v in range(tree.num_vertices):
        kids[tree.names[v]] = []
    for v in range(tree.num_vertices):
        for c in tree.children[v]:
            pname, cname = tree.names[v], tree.names[c]
            prev = pname
            for i in range(1, extra_on.get(c, 0) + 1):
                new = f"{pname}_{cname}_{i}"
                while new in used:
                    new += "_"
                used.add(new)
                kids[prev].append(new)
                kids[new] = []
                prev = new
            kids[prev].append(cname)
    return PlanarTree.from_nested(tree.names[0], kids)


# --- text grammar -------------------------------------------------------------


def parse_tree(text: str) -> PlanarTree:
    """Parse ``name(child, child, ...)`` notation; the first name is the root."""
    src = "".join(text.split())
    pos = 0
    kids: dict[str, list[str]] = {}
    seen: set[str] = set()

    def name() -> str:
        nonlocal pos
        m = NAME_RE.match(src, pos)
        if not m:
            raise TreeSyntaxError(f"expected a vertex name at offset {pos} in {src!r}")
        pos = m.end()
        nm = m.group()
        if nm in seen:
            raise TreeError(f"duplicate vertex name {nm!r}")
        seen.add(nm)
        return nm

    def node() -> str:
        nonlocal pos
        nm = name()
        kids[nm] = []
        if pos < len(src) and src[pos] == "(":
            pos += 1
            kids[nm].append(node())
            while pos < len(src) and src[pos] == ",":
                pos += 1
                kids[nm].append(node())
            if pos >= len(src) or src[pos] != ")":
                raise TreeSyntaxError(f"expected ')' at offset {pos} in {src!r}")
            pos += 1
        return nm

    root = node()
    if pos != len(src):
        raise TreeSyntaxError(f"trailing input at offset {pos} in {src!r}")
    return PlanarTree.from_nested(root, kids)
