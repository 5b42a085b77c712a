"""Command line entry point: ``treebraid <command> --tree FILE --n N ...``."""
from __future__ import annotations

import argparse
import json
import random
import sys
from itertools import combinations


from . import cocycles, morse, oracle, ring
from .cells import CellError, cell_to_text, parse_cell
from .clouds import PictureError, bar_tuple, enumerate_pictures, lub, parse_picture, picture_name
from .complex import UDComplex
from .rewrite import RewriteError, certificate_json
from .sums import FormalSum
from .tree import PlanarTree, TreeError, TreeSyntaxError, parse_tree, subdivide_for

GRAMMAR = """tree grammar:  tree := name "(" tree {"," tree} ")" | name
  names are [A-Za-z0-9_*]+, the first name is the basepoint (it must have one child),
  children are listed leftmost first; whitespace is ignored.
cell:       {v:NAME, v:NAME, e:NAME>NAME, ...}
generator:  [eA>B | Cm:k, ...]  (m = least vertex of a cloud)  or  (B,1,2,~1,0)"""

COMMANDS = ("subdivide", "stats", "classify", "homology", "generators", "product",
            "presentation", "conjecture", "verify")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _parser() -> argparse.ArgumentParser:
    p = _Parser(prog="treebraid", description="Cohomology rings of tree braid groups.",
                epilog=GRAMMAR, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("args", nargs="*", help="generator names for 'product'")
    p.add_argument("--tree", required=True, help="file holding the tree in the tree grammar")
    p.add_argument("--n", type=int, required=True, help="number of strands")
    p.add_argument("--cell", help="cell for 'classify'")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--budget", type=int, default=None, help="oracle cell budget (env TREEBRAID_BUDGET)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=20, help="sample size for 'verify'")
    p.add_argument("--no-subdivide", action="store_true",
                   help="fail instead of subdividing an insufficient tree")
    p.add_argument("--critical-only", action="store_true", help="'generators': list critical ones only")
    return p


def _load_tree(path: str) -> PlanarTree:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise TreeError(f"cannot read tree file: {exc}") from None
    return parse_tree(text)


def _emit(obj, fmt: str, text: str | None = None) -> None:
    if fmt == "json":
        print(json.dumps(obj, indent=2))
    else:
        print(text if text is not None else json.dumps(obj))


def _sum_json(tree, s: FormalSum) -> list[dict]:
    return [{"coef": c, "picture": picture_name(tree, p)} for p, c in sorted(s.items())]


def _sum_text(tree, s: FormalSum) -> str:
    if not s:
        return "0"
    return " ".join(f"{'+' if c > 0 else '-'} {abs(c)}*{picture_name(tree, p)}" for p, c in sorted(s.items()))


# --- commands ----------------------------------------------------------------------------


def cmd_subdivide(tree, a):
    t = subdivide_for(tree, a.n)
    _emit({"tree": t.to_text(), "vertices": t.num_vertices, "edges": t.num_vertices - 1}, a.format, t.to_text())
    return 0


def cmd_stats(tree, a):
    X = UDComplex(tree, a.n)
    sizes = X.sizes()
    crit = morse.critical_counts(X)
    obj = {"vertices": tree.num_vertices, "essential": [tree.names[v] for v in tree.essential_vertices],
           "cells": sizes, "critical_counts": crit}
    _emit(obj, a.format, f"cells {sizes}\ncritical {crit}")
    return 0


def cmd_classify(tree, a):
    if not a.cell:
        raise UsageError("classify needs --cell")
    c = parse_cell(tree, a.cell)
    if c.n != a.n:
        raise CellError(f"cell has {c.n} members, expected n={a.n}")
    cl = morse.classify(tree, c)
    w = None
    if cl.witness is not None:
        w = ("v:" + tree.names[cl.witness]) if cl.kind == morse.REDUNDANT else ("e:" + tree.edge_name(cl.witness))
    _emit({"cell": cell_to_text(tree, c), "kind": cl.kind, "witness": w}, a.format, cl.kind)
    return 0


def cmd_homology(tree, a):
    b = morse.betti(tree, a.n)
    X = UDComplex(tree, a.n)
    _emit({"betti": b, "critical_counts": morse.critical_counts(X)}, a.format, " ".join(map(str, b)))
    return 0


def cmd_generators(tree, a):
    out = []
    for g in enumerate_pictures(tree, a.n, 1):
        crit = cocycles.is_critical(tree, g)
        if a.critical_only and not crit:
            continue
        out.append({"name": picture_name(tree, g), "critical": crit, "bar": bar_tuple(tree, g),
                    "rank": list(cocycles.rank(tree, g))})
    _emit({"generators": out}, a.format,
          "\n".join(("* " if g["critical"] else "  ") + g["name"] for g in out))
    return 0


def cmd_product(tree, a):
    if not a.args:
        raise UsageError("product needs one or more generator names")
    gens = [parse_picture(tree, s, a.n) for s in a.args]
    for g in gens:
        if g.dim != 1:
            raise PictureError(f"{picture_name(tree, g)} is not a generator (1-class)")
    prod, res = ring.multiply(tree, gens, with_certificate=True)
    top = lub(tree, gens) if len(set(gens)) == len(gens) else None
    obj = {"factors": [picture_name(tree, g) for g in gens],
           "upper_bound": picture_name(tree, top) if top is not None else None,
           "terms": _sum_json(tree, prod),
           "certificate": certificate_json(tree, res.certificate) if res is not None else []}
    _emit(obj, a.format, _sum_text(tree, prod))
    return 0


def cmd_presentation(tree, a):
    P = ring.presentation(tree, a.n)
    obj = P.to_json(tree)
    obj["quotient_ranks"] = ring.quotient_ranks(tree, P)
    _emit(obj, a.format, f"{len(P.generators)} generators, {len(P.relations)} relations, "
                         f"quotient ranks {obj['quotient_ranks']}, betti {P.betti}")
    return 0


def cmd_conjecture(tree, a):
    rep = ring.conjecture_probe(tree, a.n)
    obj = {"dims": rep.dims, "betti": rep.betti, "match": rep.match, "ok": rep.ok,
           "pairs": rep.pair_checks}
    _emit(obj, a.format, f"dims {rep.dims} betti {rep.betti} ok={rep.ok}")
    return 0 if rep.ok else 2


def run_verify(tree: PlanarTree, n: int, budget=None, seed: int = 0, samples: int = 20) -> dict:
    """Oracle suite: SNF vs Morse counts, duality, lub vs brute force, rewrite soundness."""
    rng = random.Random(seed)
    checks = []

    def add(name, ok, **detail):
        checks.append({"name": name, "ok": bool(ok), **detail})

    rc = oracle.reduced(tree, n, budget)
    X = rc.X
    H = rc.homology()
    crit = morse.critical_counts(X)
    add("betti_vs_snf", [r for r, _ in H] == crit, snf=[r for r, _ in H], critical=crit)
    add("torsion_free", all(not t for _, t in H), torsion=[t for _, t in H])
    for d in range(n + 1):
        cps = cocycles.critical_pictures(tree, n, d)
        if len(cps) != crit[d]:
            add(f"critical_classes_{d}", False, classes=len(cps), cells=crit[d])
            continue
        ok, P = oracle.pairing_check(rc, d, [cocycles.cochain_vector(X, p, d) for p in cps])
        add(f"pairing_{d}", ok, size=int(P.shape[0]))
    gens = list(enumerate_pictures(tree, n, 1))
    pairs = list(combinations(range(len(gens)), 2))
    rng.shuffle(pairs)
    bad = 0
    for i, j in pairs[:samples]:
        if lub(tree, [gens[i], gens[j]]) != oracle.brute_lub([gens[i], gens[j]], tree, n, budget):
            bad += 1
    add("lub_vs_brute", bad == 0, sampled=min(samples, len(pairs)), mismatches=bad)
    if n >= 2:
        pics2 = list(enumerate_pictures(tree, n, 2))
        rng.shuffle(pics2)
        bad = 0
        for phi in pics2[:samples]:
            res = ring.rewrite_to_critical(tree, phi)
            diff = FormalSum({phi: 1}) - res.critical
            if diff and not oracle.is_coboundary(rc, 2, cocycles.cochain_vector(X, diff, 2)):
                bad += 1
        add("rewrite_sound", bad == 0, sampled=min(samples, len(pics2)), failures=bad)
    return {"checks": checks, "ok": all(c["ok"] for c in checks)}


def cmd_verify(tree, a):
    rep = run_verify(tree, a.n, a.budget, a.seed, a.samples)
    _emit(rep, a.format, "\n".join(f"{'PASS' if c['ok'] else 'FAIL'} {c['name']}" for c in rep["checks"]))
    return 0 if rep["ok"] else 2


HANDLERS = {name: globals()[f"cmd_{name}"] for name in COMMANDS}


def run(argv=None) -> int:
    try:
        a = _parser().parse_intermixed_args(argv)
        if a.n < 1:
            raise UsageError("--n must be >= 1")
        if a.budget is not None and a.budget <= 0:
            raise UsageError("--budget must be positive")
        tree = _load_tree(a.tree)
        if a.command != "subdivide":
            if not tree.is_sufficiently_subdivided(a.n):
                if a.no_subdivide:
                    raise TreeError(f"tree is not sufficiently subdivided for n={a.n}")
                tree = subdivide_for(tree, a.n)
        return HANDLERS[a.command](tree, a)
    except UsageError as exc:
        print(f"{exc}\n\n{GRAMMAR}", file=sys.stderr)
        return 1
    except (TreeSyntaxError, TreeError, CellError, PictureError, RewriteError,
            oracle.OracleBudgetError, oracle.OracleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
