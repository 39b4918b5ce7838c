"""Counting and category-law suites for monochrome diagrams.

>>> check_counts(6)["ok"]
True
"""

from __future__ import annotations

import random
from itertools import product
from typing import Dict, List, Tuple

from .circuit import _Tally
from .diagram import (
    BrauerDiagram,
    cap_n,
    compose,
    cup_n,
    double_factorial,
    enumerate_diagrams,
    format_diagram,
    identity,
    oplus,
    Permutation,
    compose_all,
    permutation_diagram,
    sym,
    transpose,
)

__all__ = ["check_counts", "check_category_laws", "random_diagram", "swap"]


def random_diagram(rng: random.Random, m: int, n: int, max_closed: int = 0) -> BrauerDiagram:
    pts = list(range(m + n))
    rng.shuffle(pts)
    pairs = tuple(zip(pts[::2], pts[1::2]))
    return BrauerDiagram(m, n, pairs, rng.randint(0, max_closed))


def check_counts(max_total: int = 10, max_square: int = 5) -> dict:
    """Enumerated open-diagram counts against ``(m+n-1)!!``."""
    rows = []
    ok = True
    for total in range(max_total + 1):
        for m in range(total + 1):
            n = total - m
            diagrams = enumerate_diagrams(m, n)
            distinct = len(set(diagrams)) == len(diagrams)
            expected = 0 if total % 2 else double_factorial(total - 1)
            good = distinct and len(diagrams) == expected
            ok &= good
            rows.append({"m": m, "n": n, "count": len(diagrams), "expected": expected, "ok": good})
    square = []
    for n in range(1, max_square + 1):
        count = len(enumerate_diagrams(n, n))
        expected = double_factorial(2 * n - 1)
        ok &= count == expected
        square.append({"n": n, "dim": count, "expected": expected, "ok": count == expected})
    return {"suite": "counts", "rows": rows, "square": square, "ok": ok}


def _homs(max_points: int, max_closed: int) -> Dict[Tuple[int, int], List[BrauerDiagram]]:
    return {
        (m, n): enumerate_diagrams(m, n, max_closed)
        for m in range(max_points + 1)
        for n in range(max_points + 1 - m)
        if (m + n) % 2 == 0
    }


def swap(a: int, b: int) -> BrauerDiagram:
    """The symmetry moving a block of ``a`` strands past a block of ``b``."""
    return permutation_diagram(Permutation(tuple(b + i for i in range(a)) + tuple(range(b))))


def _fmt(*fs: BrauerDiagram) -> dict:
    return {f"f{i}": format_diagram(f) for i, f in enumerate(fs)}


def check_category_laws(max_points: int = 4, random_cases: int = 1000, random_points: int = 8,
                        max_triangle: int = 4, seed: int = 0) -> dict:
    """Associativity, units, interchange, braid and triangle identities.

    Exhaustive over hom-sets with at most ``max_points`` boundary points
    (each diagram with up to one loop), then ``random_cases`` random
    instances with up to ``random_points`` points per hom-set.
    """
    tally = _Tally()
    homs = _homs(max_points, 1)
    by_source: Dict[int, List[BrauerDiagram]] = {}
    for (m, _), fs in homs.items():
        by_source.setdefault(m, []).extend(fs)

    def assoc(f, g, h):
        lhs = compose(compose(f, g), h)
        rhs = compose(f, compose(g, h))
        tally.record("associativity", lhs == rhs, lambda: _fmt(f, g, h))

    def units(f):
        tally.record("left_unit", compose(identity(f.m), f) == f, lambda: _fmt(f))
        tally.record("right_unit", compose(f, identity(f.n)) == f, lambda: _fmt(f))

    def interchange(f1, g1, f2, g2):
        lhs = compose(oplus(f1, f2), oplus(g1, g2))
        rhs = oplus(compose(f1, g1), compose(f2, g2))
        tally.record("interchange", lhs == rhs, lambda: _fmt(f1, g1, f2, g2))

    def contravariance(f, g):
        ok = transpose(compose(f, g)) == compose(transpose(g), transpose(f))
        tally.record("transpose_contravariant", ok, lambda: _fmt(f, g))

    for fs in homs.values():
        for f in fs:
            units(f)
    pairs = []
    for f in (f for fs in homs.values() for f in fs):
        for g in by_source.get(f.n, []):
            pairs.append((f, g))
            contravariance(f, g)
            for h in by_source.get(g.n, []):
                assoc(f, g, h)
    # interchange on composable pairs whose sums stay within the bound
    for (f1, g1), (f2, g2) in product(pairs, repeat=2):
        if max(f1.m + f2.m + f1.n + f2.n, f1.n + f2.n + g1.n + g2.n) <= max_points:
            interchange(f1, g1, f2, g2)

    # symmetry coherence on three strands and involutivity
    s1 = oplus(sym(), identity(1))
    s2 = oplus(identity(1), sym())
    tally.record("braid", compose(compose(s1, s2), s1) == compose(compose(s2, s1), s2), lambda: {})
    for x, y, z in product(range(3), repeat=3):
        lhs = compose_all(oplus(swap(x, y), identity(z)), oplus(identity(y), swap(x, z)), oplus(swap(y, z), identity(x)))
        rhs = compose_all(oplus(identity(x), swap(y, z)), oplus(swap(x, z), identity(y)), oplus(identity(z), swap(x, y)))
        tally.record("braid_blocks", lhs == rhs, lambda: {"x": x, "y": y, "z": z})
        tally.record("symmetric", compose(swap(x, y), swap(y, x)) == identity(x + y), lambda: {"x": x, "y": y})
    tally.record("sym_involution", compose(sym(), sym()) == identity(2), lambda: {})

    for n in range(max_triangle + 1):
        left = compose(oplus(identity(n), cup_n(n)), oplus(cap_n(n), identity(n)))
        right = compose(oplus(cup_n(n), identity(n)), oplus(identity(n), cap_n(n)))
        tally.record("triangle", left == identity(n) == right, lambda: {"n": n})

    rng = random.Random(seed)
    sizes = [(m, n) for m in range(random_points + 1) for n in range(random_points + 1 - m) if (m + n) % 2 == 0]
    for _ in range(random_cases):
        a, b = rng.choice(sizes)
        c = rng.choice([k for k in range(random_points + 1 - b) if (b + k) % 2 == 0])
        e = rng.choice([k for k in range(random_points + 1 - c) if (c + k) % 2 == 0])
        f = random_diagram(rng, a, b, 1)
        g = random_diagram(rng, b, c, 1)
        h = random_diagram(rng, c, e, 1)
        assoc(f, g, h)
        units(f)
        contravariance(f, g)
        b2 = rng.randint(0, 2)
        f2 = random_diagram(rng, rng.choice([k for k in range(3) if (k + b2) % 2 == 0]), b2, 1)
        g2 = random_diagram(rng, b2, rng.choice([k for k in range(3) if (k + b2) % 2 == 0]), 1)
        interchange(f, g, f2, g2)
    return tally.report(suite="category-laws", max_points=max_points, random_cases=random_cases,
                        random_points=random_points, seed=seed)
