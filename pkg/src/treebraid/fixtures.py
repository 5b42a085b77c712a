"""Named trees used by the tests, the benchmark and the CLI."""
from __future__ import annotations

from .tree import PlanarTree, parse_tree, subdivide_for

# Y with two-edge arms; numbering * p c l1 l2 r1 r2 = 0..6
Y3 = "*(p(c(l1(l2),r1(r2))))"
# letter H with the basepoint at the bottom-left leaf
H = "*(A(TL,B(TR,BR)))"
# caterpillar with three trivalent vertices
CATERPILLAR = "*(A(a,B(b,C(c,d))))"
PATH4 = "*(a(b(c)))"


def _fork28() -> str:
    """A tree matching every numbered vertex quoted for the worked examples.

    v9 and v12 are trivalent; {v10..v18} lies in direction 1 from v9 and
    {v19..v27} in direction 2; {v13,v14,v15} and {v16,v17,v18} hang off v12.
    """
    def chain(names):
        s = names[-1]
        for nm in reversed(names[:-1]):
            s = f"{nm}({s})"
        return s

    v = [f"v{i}" for i in range(28)]
    left = chain(v[10:12] + [f"v12({chain(v[13:16])},{chain(v[16:19])})"])
    right = chain(v[19:28])
    return chain(["*"] + v[1:9] + [f"v9({left},{right})"])


FORK28 = _fork28()

NAMED = {"Y3": Y3, "H": H, "CATERPILLAR": CATERPILLAR, "PATH4": PATH4, "FORK28": FORK28}


def named_tree(name: str, n: int | None = None) -> PlanarTree:
    t = parse_tree(NAMED[name])
    return subdivide_for(t, n) if n is not None else t


def y3() -> PlanarTree:
    return parse_tree(Y3)


def h5() -> PlanarTree:
    return subdivide_for(parse_tree(H), 5)


def caterpillar4() -> PlanarTree:
    return subdivide_for(parse_tree(CATERPILLAR), 4)


def fork28() -> PlanarTree:
    return parse_tree(FORK28)
