"""Integer linear combinations with exact cancellation."""
from __future__ import annotations

from typing import Hashable, Iterable


class FormalSum(dict):
    """Map key -> nonzero int.  Zero coefficients are never stored."""

    def add(self, key: Hashable, coef: int = 1) -> None:
        if not coef:
            return
        c = self.get(key, 0) + coef
        if c:
            self[key] = c
        else:
            del self[key]

    def iadd(self, other: "FormalSum", scale: int = 1) -> "FormalSum":
        for k, c in other.items():
            self.add(k, scale * c)
        return self

    @classmethod
    def of(cls, items: Iterable[tuple[Hashable, int]]) -> "FormalSum":
        out = cls()
        for k, c in items:
            out.add(k, c)
        return out

    def copy(self) -> "FormalSum":
        return type(self)(self)

    def scaled(self, scale: int) -> "FormalSum":
        return type(self)((k, scale * c) for k, c in self.items()) if scale else type(self)()

    def __add__(self, other):
        return self.copy().iadd(other)

    def __sub__(self, other):
        return self.copy().iadd(other, -1)

    def __neg__(self):
        return self.scaled(-1)
