"""The operad of wiring diagrams and the free circuit algebra.

A wiring diagram of type ``(c_1, ..., c_k; d)`` is a coloured Brauer
diagram ``c_1 + ... + c_k -> d`` whose source is cut into ``k`` blocks.
Operad composition plugs the ``f_i`` into the blocks of ``g``::

    gamma(g, [f_1, ..., f_k]) = g o (f_1 + ... + f_k)

>>> from brauerkit.diagram import cap, cup
>>> g = WiringDiagram.monochrome(cap(), [2])
>>> f = WiringDiagram.monochrome(cup(), [])
>>> gamma(g, [f]).body.base.closed
1
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import permutations, product
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from .diagram import BrauerDiagram, Permutation, enumerate_diagrams, is_downward
from .palette import (
    ColourError,
    ColouredDiagram,
    Palette,
    colour_diagram,
    coloured_compose,
    coloured_empty,
    coloured_identity,
    coloured_oplus,
    coloured_permutation,
    format_coloured,
    point_palette,
)

__all__ = [
    "WiringDiagram",
    "gamma",
    "identity_wiring",
    "permute_blocks",
    "is_connected",
    "is_nonunital_admissible",
    "DecoratedElement",
    "generator_element",
    "free_ca_apply",
    "enumerate_wiring",
    "check_operad_laws",
]

Word = Tuple[str, ...]


@dataclass(frozen=True)
class WiringDiagram:
    """``body`` with its input word cut into ``blocks``."""

    body: ColouredDiagram
    blocks: Tuple[Word, ...]

    def __post_init__(self):
        blocks = tuple(tuple(b) for b in self.blocks)
        flat = tuple(c for b in blocks for c in b)
        if flat != self.body.input_type:
            raise ColourError(f"blocks {blocks} do not match input type {self.body.input_type}")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def monochrome(cls, base: BrauerDiagram, sizes: Sequence[int]) -> "WiringDiagram":
        pal = point_palette()
        if sum(sizes) != base.m:
            raise ValueError(f"block sizes {list(sizes)} do not add up to {base.m}")
        body = colour_diagram(pal, base, ("x",) * base.m, ("x",) * base.n, ("x",) * base.closed)
        return cls(body, tuple(("x",) * s for s in sizes))

    @property
    def palette(self) -> Palette:
        return self.body.palette

    @property
    def arity(self) -> int:
        return len(self.blocks)

    @property
    def output(self) -> Word:
        return self.body.output_type

    def block_of(self) -> List[int]:
        """Block index of every source point."""
        out = []
        for k, b in enumerate(self.blocks):
            out += [k] * len(b)
        return out

    def __str__(self):
        sizes = ",".join(str(len(b)) for b in self.blocks)
        return f"[{sizes}] {format_coloured(self.body)}"


def identity_wiring(palette: Palette, word: Sequence[str]) -> WiringDiagram:
    """The operad unit at ``word``: one block, identity body."""
    return WiringDiagram(coloured_identity(palette, word), (tuple(word),))


def gamma(g: WiringDiagram, fs: Sequence[WiringDiagram]) -> WiringDiagram:
    """Plug ``fs[i]`` into block ``i`` of ``g``."""
    if len(fs) != g.arity:
        raise ValueError(f"{g.arity} blocks but {len(fs)} diagrams")
    for k, (f, b) in enumerate(zip(fs, g.blocks)):
        if f.output != b:
            raise ColourError(f"block {k}: output {f.output} does not match {b}", k)
    inner = coloured_empty(g.palette)
    for f in fs:
        inner = coloured_oplus(inner, f.body)
    body = coloured_compose(inner, g.body)
    return WiringDiagram(body, tuple(b for f in fs for b in f.blocks))


def permute_blocks(w: WiringDiagram, order: Sequence[int]) -> WiringDiagram:
    """Reorder blocks: new block ``i`` is old block ``order[i]``."""
    if sorted(order) != list(range(w.arity)):
        raise ValueError(f"not a block order: {list(order)}")
    starts, pos = [], 0
    for b in w.blocks:
        starts.append(pos)
        pos += len(b)
    old_pos = [starts[k] + t for k in order for t in range(len(w.blocks[k]))]
    new_word = tuple(c for k in order for c in w.blocks[k])
    p = Permutation(tuple(old_pos))
    shuffle = coloured_permutation(w.palette, new_word, p)
    return WiringDiagram(coloured_compose(shuffle, w.body), tuple(w.blocks[k] for k in order))


def _components(w: WiringDiagram) -> List[List[int]]:
    """Boundary points of each open component; every arc is one component."""
    return [list(p) for p in w.body.base.pairs]


def is_connected(w: WiringDiagram) -> bool:
    """Is ``w`` not a disjoint sum of two wiring diagrams?

    Vertices are the blocks together with every component touching no
    block (output-only arcs and closed loops); arcs join the blocks they
    touch. The diagram is connected iff this graph is connected; the empty
    graph counts as connected. So a lone bubble is connected, and a bubble
    next to anything else is not.
    """
    base = w.body.base
    owner = w.block_of()
    parent = list(range(w.arity))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    floating = base.closed
    for a, b in base.pairs:
        ks = {owner[x] for x in (a, b) if x < base.m}
        if not ks:
            floating += 1
        elif len(ks) == 2:
            x, y = ks
            parent[find(x)] = find(y)
    roots = {find(k) for k in range(w.arity)}
    return len(roots) + floating <= 1


def is_nonunital_admissible(w: WiringDiagram) -> bool:
    """Is the body downward (no cups, no loops)?"""
    return is_downward(w.body.base)


# --------------------------------------------------------------------------
# free circuit algebra


@dataclass(frozen=True)
class DecoratedElement:
    """A wiring diagram whose ``k`` blocks carry generator labels.

    Elements are kept in canonical form: blocks sorted by ``(grade, label)``
    and, among equal blocks, in the order giving the smallest body text.
    """

    wiring: WiringDiagram
    labels: Tuple[str, ...]

    def __post_init__(self):
        if len(self.labels) != self.wiring.arity:
            raise ValueError("one label per block required")
        object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def grade(self) -> Word:
        return self.wiring.output

    def canonical(self) -> "DecoratedElement":
        return canonical_form(self)

    def __str__(self):
        return f"{list(self.labels)} {self.wiring}"


def _sort_key(w: WiringDiagram):
    return (format_coloured(w.body), w.blocks)


def canonical_form(x: DecoratedElement) -> DecoratedElement:
    """Representative of the orbit of ``x`` under block permutations."""
    w = x.wiring
    keys = [(w.blocks[k], x.labels[k]) for k in range(w.arity)]
    groups: Dict[tuple, List[int]] = {}
    for k, key in enumerate(keys):
        groups.setdefault(key, []).append(k)
    ordered = [groups[key] for key in sorted(groups)]
    best = None
    for choice in product(*(permutations(g) for g in ordered)):
        order = [k for part in choice for k in part]
        cand = permute_blocks(w, order)
        if best is None or _sort_key(cand) < _sort_key(best[0]):
            best = (cand, order)
    cand, order = best
    return DecoratedElement(cand, tuple(x.labels[k] for k in order))


def generator_element(palette: Palette, name: str, grade: Sequence[str]) -> DecoratedElement:
    return DecoratedElement(identity_wiring(palette, grade), (name,))


def free_ca_apply(w: WiringDiagram, elems: Sequence[DecoratedElement]) -> DecoratedElement:
    """Action of ``w`` on the free circuit algebra."""
    if len(elems) != w.arity:
        raise ValueError(f"{w.arity} blocks but {len(elems)} elements")
    for k, (x, b) in enumerate(zip(elems, w.blocks)):
        if x.grade != b:
            raise ColourError(f"block {k}: grade {x.grade} does not match {b}", k)
    wiring = gamma(w, [x.wiring for x in elems])
    labels = tuple(l for x in elems for l in x.labels)
    return canonical_form(DecoratedElement(wiring, labels))


# --------------------------------------------------------------------------
# enumeration and law checks


def _block_shapes(max_blocks: int, max_block: int) -> Iterator[Tuple[int, ...]]:
    for k in range(max_blocks + 1):
        yield from product(range(max_block + 1), repeat=k)


def enumerate_wiring(max_blocks: int, max_block: int, outputs: Sequence[int],
                     max_closed: int = 0) -> List[WiringDiagram]:
    """All monochrome wiring diagrams with the given bounds."""
    out = []
    for sizes in _block_shapes(max_blocks, max_block):
        for n in outputs:
            for f in enumerate_diagrams(sum(sizes), n, max_closed):
                out.append(WiringDiagram.monochrome(f, sizes))
    return out


def _random_wiring(rng: random.Random, out: int, max_blocks: int, max_block: int) -> WiringDiagram:
    while True:
        sizes = tuple(rng.randint(0, max_block) for _ in range(rng.randint(0, max_blocks)))
        if (sum(sizes) + out) % 2 == 0:
            break
    points = list(range(sum(sizes) + out))
    rng.shuffle(points)
    pairs = [(points[i], points[i + 1]) for i in range(0, len(points), 2)]
    base = BrauerDiagram.from_pairs(sum(sizes), out, pairs, rng.randint(0, 1))
    return WiringDiagram.monochrome(base, sizes)


def check_operad_laws(max_blocks: int = 2, max_block: int = 2, random_cases: int = 200,
                      seed: int = 0) -> dict:
    """Operad laws, suboperad closures and free-algebra coherence.

    Exhaustive over monochrome diagrams with at most ``max_blocks`` blocks
    of at most ``max_block`` points (outputs up to ``max_block``), and
    ``random_cases`` larger random instances.
    """
    from .circuit import _Tally

    t = _Tally()
    pal = point_palette()
    outs = range(max_block + 1)
    small = enumerate_wiring(max_blocks, max_block, outs)
    by_out: Dict[int, List[WiringDiagram]] = {}
    for w in small:
        by_out.setdefault(len(w.output), []).append(w)
    single = {n: [w for w in ws if w.arity <= 1] for n, ws in by_out.items()}

    def unit(b):
        return identity_wiring(pal, b)

    for g in small:
        t.record("left_unit", gamma(unit(g.output), [g]) == g, lambda: {"g": str(g)})
        t.record("right_unit", gamma(g, [unit(b) for b in g.blocks]) == g, lambda: {"g": str(g)})
        for fs in product(*(single[len(b)] for b in g.blocks)):
            gf = gamma(g, list(fs))
            # equivariance
            for order in permutations(range(g.arity)):
                lhs = gamma(permute_blocks(g, order), [fs[k] for k in order])
                rhs = permute_blocks(gf, _expand(order, [f.arity for f in fs]))
                t.record("equivariance", lhs == rhs,
                         lambda: {"g": str(g), "fs": [str(f) for f in fs], "order": list(order)})
            # associativity with single-block inner diagrams
            for hs in product(*(single[len(b)] for f in fs for b in f.blocks)):
                hs = list(hs)
                lhs = gamma(gf, hs)
                grouped, pos = [], 0
                for f in fs:
                    grouped.append(gamma(f, hs[pos: pos + f.arity]))
                    pos += f.arity
                t.record("associativity", lhs == gamma(g, grouped),
                         lambda: {"g": str(g), "fs": [str(f) for f in fs], "hs": [str(h) for h in hs]})

    # suboperads
    conn = {n: [w for w in ws if is_connected(w)] for n, ws in by_out.items()}
    down = {n: [w for w in ws if is_nonunital_admissible(w)] for n, ws in by_out.items()}
    for pred, pool, name in ((is_connected, conn, "connected_closed"),
                             (is_nonunital_admissible, down, "downward_closed")):
        for g in small:
            if not pred(g):
                continue
            for fs in product(*(pool[len(b)] for b in g.blocks)):
                gf = gamma(g, list(fs))
                t.record(name, pred(gf), lambda: {"g": str(g), "fs": [str(f) for f in fs]})
                if name == "downward_closed":
                    t.record("downward_no_loops", gf.body.base.closed == 0, lambda: {"g": str(g)})

    # randomized: associativity, equivariance and free-algebra coherence
    rng = random.Random(seed)
    for _ in range(random_cases):
        g = _random_wiring(rng, rng.randint(0, 3), 3, 3)
        fs = [_random_wiring(rng, len(b), 2, 3) for b in g.blocks]
        hs = [_random_wiring(rng, len(b), 2, 2) for f in fs for b in f.blocks]
        grouped, pos = [], 0
        for f in fs:
            grouped.append(gamma(f, hs[pos: pos + f.arity]))
            pos += f.arity
        t.record("random_associativity", gamma(gamma(g, fs), hs) == gamma(g, grouped),
                 lambda: {"g": str(g), "fs": [str(f) for f in fs], "hs": [str(h) for h in hs]})
        order = list(range(g.arity))
        rng.shuffle(order)
        lhs = gamma(permute_blocks(g, order), [fs[k] for k in order])
        rhs = permute_blocks(gamma(g, fs), _expand(order, [f.arity for f in fs]))
        t.record("random_equivariance", lhs == rhs, lambda: {"g": str(g), "order": order})
        xs = [generator_element(pal, rng.choice("ab"), h.blocks[k])
              for h in hs for k in range(h.arity)]
        direct = free_ca_apply(gamma(gamma(g, fs), hs), xs)
        staged, pos = [], 0
        for h in hs:
            staged.append(free_ca_apply(h, xs[pos: pos + h.arity]))
            pos += h.arity
        staged2, pos = [], 0
        for f in fs:
            staged2.append(free_ca_apply(f, staged[pos: pos + f.arity]))
            pos += f.arity
        t.record("free_ca_coherence", direct == free_ca_apply(g, staged2),
                 lambda: {"g": str(g), "fs": [str(f) for f in fs], "hs": [str(h) for h in hs]})

    return t.report(suite="operad-laws", max_blocks=max_blocks, max_block=max_block,
                    random_cases=random_cases, seed=seed)


def _expand(order: Sequence[int], arities: Sequence[int]) -> List[int]:
    """Block order after composition, given the order of the outer blocks."""
    starts, pos = [], 0
    for a in arities:
        starts.append(pos)
        pos += a
    return [starts[k] + t for k in order for t in range(arities[k])]
