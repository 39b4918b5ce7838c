"""Monochrome Brauer diagrams.

A diagram ``m -> n`` is a perfect matching on ``m + n`` boundary points
together with a number of closed loops. Indices ``0..m-1`` are the sources,
``m..m+n-1`` the targets.

``compose(f, g)`` is *g after f*: ``f`` is drawn on top and its targets are
glued to the sources of ``g``.

>>> compose(cup(), cap())
BrauerDiagram.parse('0->0 : + 1')
>>> print(compose(sym(), cap()))
2->0 : (s1 s2)
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Iterator, List, Sequence, Tuple

__all__ = [
    "ArityError",
    "Permutation",
    "BrauerDiagram",
    "BoundaryCospan",
    "compose",
    "compose_all",
    "oplus",
    "oplus_all",
    "identity",
    "cup",
    "cap",
    "sym",
    "loop",
    "empty",
    "cup_n",
    "cap_n",
    "generators",
    "permutation_diagram",
    "diagram_permutation",
    "middle_cycles",
    "transpose",
    "rotate",
    "ev",
    "coev",
    "is_open",
    "is_downward",
    "is_upward",
    "is_planar",
    "predicates",
    "boundary_cospan",
    "pushout_components",
    "matchings",
    "enumerate_diagrams",
    "double_factorial",
    "format_diagram",
    "parse_diagram",
]


class ArityError(ValueError):
    """Raised when diagrams are composed along mismatched boundaries."""


# --------------------------------------------------------------------------
# permutations


@dataclass(frozen=True, order=True)
class Permutation:
    """Bijection of ``{0, ..., n-1}`` stored as its image tuple.

    ``p * q`` is the composite ``p o q`` (apply ``q`` first).

    >>> Permutation.from_cycles(3, [(1, 2, 3)]).images
    (1, 2, 0)
    """

    images: Tuple[int, ...]

    def __post_init__(self):
        imgs = tuple(self.images)
        if sorted(imgs) != list(range(len(imgs))):
            raise ValueError(f"not a permutation: {imgs}")
        object.__setattr__(self, "images", imgs)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        """Build from 1-based cycle notation."""
        img = list(range(n))
        seen = set()
        for cyc in cycles:
            cyc = [c - 1 for c in cyc]
            for c in cyc:
                if not 0 <= c < n or c in seen:
                    raise ValueError(f"bad cycle {cyc} for n={n}")
                seen.add(c)
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                img[a] = b
        return cls(tuple(img))

    @classmethod
    def transposition(cls, n: int, i: int, j: int) -> "Permutation":
        img = list(range(n))
        img[i], img[j] = img[j], img[i]
        return cls(tuple(img))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if self.n != other.n:
            raise ArityError("permutations of different sizes")
        return Permutation(tuple(self.images[other.images[i]] for i in range(self.n)))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def cycles(self) -> List[Tuple[int, ...]]:
        """Nontrivial cycles, 1-based, each starting at its smallest entry."""
        seen = set()
        out = []
        for i in range(self.n):
            if i in seen:
                continue
            cyc = []
            j = i
            while j not in seen:
                seen.add(j)
                cyc.append(j + 1)
                j = self.images[j]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def sign(self) -> int:
        s = 1
        for c in self.cycles():
            if len(c) % 2 == 0:
                s = -s
        return s

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))


# --------------------------------------------------------------------------
# diagrams


def _pairs_from_involution(inv: Sequence[int]) -> Tuple[Tuple[int, int], ...]:
    return tuple((i, j) for i, j in enumerate(inv) if i < j)


@dataclass(frozen=True, order=True)
class BrauerDiagram:
    """A Brauer diagram ``m -> n``.

    ``pairs`` is the matching as a sorted tuple of ``(lo, hi)`` index pairs;
    ``closed`` counts closed loops. Construct through :meth:`from_pairs` or
    :meth:`from_involution` to get validation and canonical ordering.
    """

    m: int
    n: int
    pairs: Tuple[Tuple[int, int], ...]
    closed: int = 0

    def __post_init__(self):
        if self.m < 0 or self.n < 0 or self.closed < 0:
            raise ValueError("arities and closed count must be nonnegative")
        pairs = tuple(sorted(tuple(sorted(p)) for p in self.pairs))
        seen = [False] * (self.m + self.n)
        for a, b in pairs:
            if a == b or not (0 <= a < len(seen) and 0 <= b < len(seen)):
                raise ValueError(f"bad pair {(a, b)} for {self.m}->{self.n}")
            if seen[a] or seen[b]:
                raise ValueError(f"point used twice in {pairs}")
            seen[a] = seen[b] = True
        if not all(seen):
            raise ValueError(f"pairing is not total on {self.m}+{self.n} points")
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def from_pairs(cls, m: int, n: int, pairs: Iterable[Tuple[int, int]], closed: int = 0) -> "BrauerDiagram":
        return cls(m, n, tuple(pairs), closed)

    @classmethod
    def from_involution(cls, m: int, n: int, inv: Sequence[int], closed: int = 0) -> "BrauerDiagram":
        for i, j in enumerate(inv):
            if inv[j] != i or i == j:
                raise ValueError("not a fixed-point-free involution")
        return cls(m, n, _pairs_from_involution(inv), closed)

    @property
    def pairing(self) -> Tuple[int, ...]:
        """The involution as an image tuple on ``0..m+n-1``."""
        inv = [0] * (self.m + self.n)
        for a, b in self.pairs:
            inv[a] = b
            inv[b] = a
        return tuple(inv)

    @property
    def size(self) -> int:
        return self.m + self.n

    def open_part(self) -> "BrauerDiagram":
        return BrauerDiagram(self.m, self.n, self.pairs, 0)

    def with_closed(self, k: int) -> "BrauerDiagram":
        return BrauerDiagram(self.m, self.n, self.pairs, k)

    def point_name(self, i: int) -> str:
        return f"s{i + 1}" if i < self.m else f"t{i - self.m + 1}"

    def __str__(self):
        return format_diagram(self)

    def __repr__(self):
        return f"BrauerDiagram.parse({format_diagram(self)!r})"

    @classmethod
    def parse(cls, text: str) -> "BrauerDiagram":
        return parse_diagram(text)


def identity(n: int) -> BrauerDiagram:
    return BrauerDiagram(n, n, tuple((i, n + i) for i in range(n)))


def empty() -> BrauerDiagram:
    return BrauerDiagram(0, 0, ())


def loop(k: int = 1) -> BrauerDiagram:
    """The closed diagram ``(empty, k)``."""
    return BrauerDiagram(0, 0, (), k)


def cup() -> BrauerDiagram:
    return BrauerDiagram(0, 2, ((0, 1),))


def cap() -> BrauerDiagram:
    return BrauerDiagram(2, 0, ((0, 1),))


def sym() -> BrauerDiagram:
    return BrauerDiagram(2, 2, ((0, 3), (1, 2)))


def cup_n(n: int) -> BrauerDiagram:
    """Nested cups ``0 -> 2n``: target ``i`` is joined to ``2n-1-i``."""
    return BrauerDiagram(0, 2 * n, tuple((i, 2 * n - 1 - i) for i in range(n)))


def cap_n(n: int) -> BrauerDiagram:
    """Nested caps ``2n -> 0``."""
    return BrauerDiagram(2 * n, 0, tuple((i, 2 * n - 1 - i) for i in range(n)))


def generators() -> dict:
    return {"id1": identity(1), "cup": cup(), "cap": cap(), "sym": sym()}


def compose(f: BrauerDiagram, g: BrauerDiagram) -> BrauerDiagram:
    """``g o f``: glue the targets of ``f`` to the sources of ``g``.

    Each cycle that lives entirely in the middle layer becomes a closed loop.
    """
    if f.n != g.m:
        raise ArityError(f"cannot compose {f.m}->{f.n} with {g.m}->{g.n}")
    m, k, n = f.m, f.n, g.n
    tf, tg = f.pairing, g.pairing
    res = [-1] * (m + n)
    visited = [False] * k

    def walk_from_middle(j: int) -> int:
        # j is a middle point reached from f; alternate g, f, g, ... until
        # we leave the middle layer; returns result index
        while True:
            visited[j] = True
            z = tg[j]
            if z >= k:
                return m + (z - k)
            visited[z] = True
            w = tf[m + z]
            if w < m:
                return w
            j = w - m

    for x in range(m + n):
        if res[x] >= 0:
            continue
        if x < m:
            y = tf[x]
            end = y if y < m else walk_from_middle(y - m)
        else:
            z = tg[k + (x - m)]
            if z >= k:
                end = m + (z - k)
            else:
                # enter the middle from g: go to f then continue
                visited[z] = True
                w = tf[m + z]
                end = w if w < m else walk_from_middle(w - m)
        res[x] = end
        res[end] = x

    cycles = 0
    for j0 in range(k):
        if visited[j0]:
            continue
        cycles += 1
        j = j0
        while not visited[j]:
            visited[j] = True
            z = tg[j]
            visited[z] = True
            j = tf[m + z] - m
    return BrauerDiagram.from_involution(m, n, res, f.closed + g.closed + cycles)


def middle_cycles(f: BrauerDiagram, g: BrauerDiagram) -> List[List[int]]:
    """Middle-layer cycles created by ``compose(f, g)``, as lists of middle indices."""
    if f.n != g.m:
        raise ArityError(f"cannot compose {f.m}->{f.n} with {g.m}->{g.n}")
    m, k = f.m, f.n
    tf, tg = f.pairing, g.pairing
    cycles = []
    seen = [False] * k
    for j0 in range(k):
        if seen[j0]:
            continue
        path = []
        j = j0
        closed = True
        # walk forward via g then f
        while True:
            path.append(j)
            seen[j] = True
            z = tg[j]
            if z >= k:
                closed = False
                break
            path.append(z)
            seen[z] = True
            w = tf[m + z]
            if w < m:
                closed = False
                break
            j = w - m
            if j == j0:
                break
        if closed:
            cycles.append(sorted(set(path)))
        else:
            # walk backward from j0 via f to mark the rest of the arc
            w = tf[m + j0]
            while w >= m:
                j = w - m
                seen[j] = True
                z = tg[j]
                if z >= k:
                    break
                seen[z] = True
                w = tf[m + z]
    return cycles


def compose_all(*fs: BrauerDiagram) -> BrauerDiagram:
    """Compose left to right: ``compose_all(f, g, h)`` is ``h o g o f``."""
    return reduce(compose, fs)


def oplus(f: BrauerDiagram, g: BrauerDiagram) -> BrauerDiagram:
    """Horizontal juxtaposition, ``f`` on the left."""
    m, n = f.m + g.m, f.n + g.n

    def shift_f(i):
        return i if i < f.m else i + g.m

    def shift_g(i):
        return f.m + i if i < g.m else m + f.n + (i - g.m)

    pairs = [(shift_f(a), shift_f(b)) for a, b in f.pairs]
    pairs += [(shift_g(a), shift_g(b)) for a, b in g.pairs]
    return BrauerDiagram(m, n, tuple(pairs), f.closed + g.closed)


def oplus_all(*fs: BrauerDiagram) -> BrauerDiagram:
    return reduce(oplus, fs, empty())


def permutation_diagram(p: Permutation) -> BrauerDiagram:
    """Source ``i`` is joined to target ``p(i)``."""
    n = p.n
    return BrauerDiagram(n, n, tuple((i, n + p(i)) for i in range(n)))


def diagram_permutation(f: BrauerDiagram) -> Permutation:
    """Inverse of :func:`permutation_diagram` on open downward-and-upward diagrams."""
    if f.m != f.n or f.closed:
        raise ValueError("not a permutation diagram")
    img = [0] * f.m
    for a, b in f.pairs:
        if not (a < f.m <= b):
            raise ValueError("not a permutation diagram")
        img[a] = b - f.m
    return Permutation(tuple(img))


def ev(f: BrauerDiagram) -> BrauerDiagram:
    """``cap_n o (id_n + f)``, a diagram ``n+m -> 0``."""
    return compose(oplus(identity(f.n), f), cap_n(f.n))


def coev(f: BrauerDiagram) -> BrauerDiagram:
    """``(f + id_m) o cup_m``, a diagram ``0 -> n+m``."""
    return compose(cup_n(f.m), oplus(f, identity(f.m)))


def transpose(f: BrauerDiagram) -> BrauerDiagram:
    """The dual ``n -> m`` built from nested caps and cups around ``f``."""
    m, n = f.m, f.n
    step1 = oplus(identity(n), cup_n(m))
    step2 = oplus_all(identity(n), f, identity(m))
    step3 = oplus(cap_n(n), identity(m))
    return compose_all(step1, step2, step3)


def rotate(f: BrauerDiagram) -> BrauerDiagram:
    """Half-turn rotation; agrees with :func:`transpose`."""
    m, n = f.m, f.n

    def move(i):
        # f-target j becomes source n-1-j, f-source i becomes target m-1-i
        return (n - 1 - (i - m)) if i >= m else n + (m - 1 - i)

    return BrauerDiagram(n, m, tuple((move(a), move(b)) for a, b in f.pairs), f.closed)


# --------------------------------------------------------------------------
# predicates


def is_open(f: BrauerDiagram) -> bool:
    return f.closed == 0


def is_downward(f: BrauerDiagram) -> bool:
    """Open, and every target is joined to a source (no cups)."""
    return is_open(f) and all(a < f.m for a, b in f.pairs if b >= f.m)


def is_upward(f: BrauerDiagram) -> bool:
    """Open, and every source is joined to a target (no caps)."""
    return is_open(f) and all(b >= f.m for a, b in f.pairs if a < f.m)


def is_planar(f: BrauerDiagram) -> bool:
    """Open and non-crossing when drawn between two horizontal lines.

    Points go round the boundary circle: sources left to right, then targets
    right to left; the matching is planar iff it nests like parentheses.
    """
    if not is_open(f):
        return False
    m, n = f.m, f.n

    def pos(i):
        return i if i < m else m + (n - 1 - (i - m))

    partner = {}
    for a, b in f.pairs:
        pa, pb = pos(a), pos(b)
        partner[pa] = pb
        partner[pb] = pa
    stack = []
    for p in range(m + n):
        q = partner[p]
        if q > p:
            stack.append(p)
        elif not stack or stack.pop() != q:
            return False
    return True


def predicates(f: BrauerDiagram) -> dict:
    return {
        "is_open": is_open(f),
        "is_downward": is_downward(f),
        "is_upward": is_upward(f),
        "is_planar": is_planar(f),
    }


# --------------------------------------------------------------------------
# cospans


@dataclass(frozen=True)
class BoundaryCospan:
    """The boundary ``∂f``, the component set and the attaching map.

    Components ``0..len(pairs)-1`` are the arcs in pair order, the rest are
    the closed loops.
    """

    boundary: Tuple[str, ...]
    components: int
    attach: Tuple[int, ...]

    def fibre_sizes(self) -> List[int]:
        sizes = [0] * self.components
        for c in self.attach:
            sizes[c] += 1
        return sizes


def boundary_cospan(f: BrauerDiagram) -> BoundaryCospan:
    attach = [0] * f.size
    for c, (a, b) in enumerate(f.pairs):
        attach[a] = attach[b] = c
    names = tuple(f.point_name(i) for i in range(f.size))
    return BoundaryCospan(names, len(f.pairs) + f.closed, tuple(attach))


def pushout_components(f: BrauerDiagram, g: BrauerDiagram) -> List[frozenset]:
    """Components of the glued 1-manifold, as sets of outer boundary points.

    Computed by union-find on the disjoint union of the two cospans modulo
    the middle identification; used to cross-check :func:`compose`. Loops
    contribute empty sets.
    """
    if f.n != g.m:
        raise ArityError("mismatch")
    m, k, n = f.m, f.n, g.n
    # nodes: f components, then g components
    cf, cg = boundary_cospan(f), boundary_cospan(g)
    parent = list(range(cf.components + cg.components))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for j in range(k):
        a, b = find(cf.attach[m + j]), find(cf.components + cg.attach[j])
        parent[a] = b
    groups = {}
    for c in range(len(parent)):
        groups.setdefault(find(c), set())
    for i in range(m):
        groups[find(cf.attach[i])].add(i)
    for i in range(n):
        groups[find(cf.components + cg.attach[k + i])].add(m + i)
    return sorted((frozenset(s) for s in groups.values()), key=lambda s: (len(s) == 0, sorted(s)))


# --------------------------------------------------------------------------
# enumeration


def double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def matchings(points: Sequence[int]) -> Iterator[Tuple[Tuple[int, int], ...]]:
    """All perfect matchings, in lexicographic order of their sorted pair lists."""
    points = list(points)
    if not points:
        yield ()
        return
    if len(points) % 2:
        return
    first, rest = points[0], points[1:]
    for i, q in enumerate(rest):
        for tail in matchings(rest[:i] + rest[i + 1:]):
            yield ((first, q),) + tail


def enumerate_diagrams(m: int, n: int, max_closed: int = 0) -> List[BrauerDiagram]:
    """Every diagram ``m -> n`` with at most ``max_closed`` loops.

    Ordered by closed count, then lexicographically by pairs (which is the
    dataclass ordering restricted to fixed arity).
    """
    opens = [BrauerDiagram(m, n, p) for p in matchings(range(m + n))]
    return [d.with_closed(k) for k in range(max_closed + 1) for d in opens]


# --------------------------------------------------------------------------
# text form

_POINT = re.compile(r"([st])(\d+)")
_HEADER = re.compile(r"\s*(\d+)\s*->\s*(\d+)\s*:\s*")


def format_diagram(f: BrauerDiagram) -> str:
    """Canonical text, e.g. ``2->2 : (s1 t2)(s2 t1)`` or ``0->0 : + 1``."""
    body = "".join(f"({f.point_name(a)} {f.point_name(b)})" for a, b in f.pairs)
    head = f"{f.m}->{f.n} :"
    if body:
        head += " " + body
    if f.closed:
        head += f" + {f.closed}"
    return head


def _point_index(tok: str, m: int, n: int) -> int:
    mt = _POINT.fullmatch(tok)
    if not mt:
        raise ValueError(f"bad boundary point {tok!r}")
    side, k = mt.group(1), int(mt.group(2))
    lim = m if side == "s" else n
    if not 1 <= k <= lim:
        raise ValueError(f"boundary point {tok!r} out of range for {m}->{n}")
    return k - 1 if side == "s" else m + k - 1


def parse_diagram(text: str) -> BrauerDiagram:
    """Inverse of :func:`format_diagram`; whitespace is insignificant.

    >>> parse_diagram("2->0:(s1 s2)") == cap()
    True
    """
    mt = _HEADER.match(text)
    if not mt:
        raise ValueError(f"expected 'm->n :' at start of {text!r}")
    m, n = int(mt.group(1)), int(mt.group(2))
    rest = text[mt.end():]
    pairs = []
    closed = 0
    for g in re.finditer(r"\(\s*(\w+)\s+(\w+)\s*\)|\+\s*(\d+)|(\S)", rest):
        if g.group(4):
            raise ValueError(f"unexpected {g.group(4)!r} at offset {mt.end() + g.start()}")
        if g.group(3) is not None:
            if rest[g.end():].strip():
                raise ValueError("closed count must come last")
            closed = int(g.group(3))
        else:
            pairs.append((_point_index(g.group(1), m, n), _point_index(g.group(2), m, n)))
    return BrauerDiagram(m, n, tuple(pairs), closed)
