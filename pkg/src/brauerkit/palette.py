"""Involutive palettes and coloured Brauer diagrams.

A palette is a finite colour set with an involution ``omega``. A colouring
of a diagram assigns a colour to every boundary point so that the two ends
of an arc carry colours exchanged by ``omega``; closed loops carry an
``omega``-orbit. The input word reads ``omega`` of the source colours, the
output word reads the target colours.

The oriented palette has colours ``+`` (up) and ``-`` (down), or
``d+`` / ``d-`` for an underlying colour set ``D``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .diagram import (
    ArityError,
    BrauerDiagram,
    Permutation,
    compose,
    middle_cycles,
    oplus,
    permutation_diagram,
)

__all__ = [
    "ColourError",
    "Palette",
    "ColouredDiagram",
    "point_palette",
    "oriented_palette",
    "is_up",
    "coloured_identity",
    "coloured_cup",
    "coloured_cap",
    "coloured_sym",
    "coloured_loop",
    "coloured_permutation",
    "coloured_empty",
    "coloured_compose",
    "coloured_oplus",
    "colour_diagram",
    "dual_object",
    "walled_normal_form",
    "walled_conjugate",
    "palette_pushforward",
    "format_coloured",
    "parse_coloured",
]


class ColourError(ValueError):
    """Colour or palette mismatch; ``index`` is the first offending position."""

    def __init__(self, msg: str, index: Optional[int] = None):
        super().__init__(msg)
        self.index = index


@dataclass(frozen=True)
class Palette:
    colours: Tuple[str, ...]
    omega: Tuple[Tuple[str, str], ...]

    def __post_init__(self):
        cols = tuple(self.colours)
        if len(set(cols)) != len(cols):
            raise ValueError("duplicate colours")
        om = dict(self.omega)
        for c in cols:
            om.setdefault(c, c)
        if set(om) != set(cols):
            raise ValueError("omega must be defined on the colours only")
        for c in cols:
            if om[c] not in om or om[om[c]] != c:
                raise ValueError(f"omega is not an involution at {c!r}")
        object.__setattr__(self, "colours", cols)
        object.__setattr__(self, "omega", tuple(sorted(om.items())))

    @classmethod
    def make(cls, colours: Iterable[str], omega: Optional[Mapping[str, str]] = None) -> "Palette":
        """``omega`` may list each swapped pair once; the inverse is filled in."""
        om = dict(omega or {})
        for c, d in list(om.items()):
            if om.setdefault(d, c) != c:
                raise ValueError(f"omega is not an involution at {d!r}")
        return cls(tuple(colours), tuple(om.items()))

    def w(self, c: str) -> str:
        return dict(self.omega)[c]

    def orbit(self, c: str) -> str:
        """Representative of the orbit of ``c``: whichever of ``c, omega(c)``
        is listed first."""
        d = self.w(c)
        return c if self.colours.index(c) <= self.colours.index(d) else d

    def orbits(self) -> List[str]:
        return sorted({self.orbit(c) for c in self.colours}, key=self.colours.index)

    def check_word(self, word: Sequence[str]) -> Tuple[str, ...]:
        for i, c in enumerate(word):
            if c not in self.colours:
                raise ColourError(f"colour {c!r} not in palette", i)
        return tuple(word)

    def to_json(self) -> str:
        om = {c: d for c, d in self.omega if c != d}
        return json.dumps({"colours": list(self.colours), "omega": om}, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Palette":
        data = json.loads(text)
        return cls.make(data["colours"], data.get("omega", {}))


def point_palette() -> Palette:
    """The one-colour palette; coloured diagrams over it are monochrome."""
    return Palette.make(["x"])


def oriented_palette(D: Optional[Sequence[str]] = None) -> Palette:
    if D is None:
        return Palette.make(["+", "-"], {"+": "-", "-": "+"})
    cols = [f"{d}{s}" for d in D for s in "+-"]
    om = {}
    for d in D:
        om[f"{d}+"] = f"{d}-"
        om[f"{d}-"] = f"{d}+"
    return Palette.make(cols, om)


def is_up(c: str) -> bool:
    return c.endswith("+")


@dataclass(frozen=True, order=True)
class ColouredDiagram:
    """A Brauer diagram with an omega-compatible boundary colouring.

    ``colours[i]`` colours boundary point ``i``; ``closed_orbits`` is the
    sorted multiset of orbit representatives, one per loop.
    """

    base: BrauerDiagram
    colours: Tuple[str, ...]
    closed_orbits: Tuple[str, ...] = ()
    palette: Palette = field(default_factory=point_palette, compare=False)

    def __post_init__(self):
        pal = self.palette
        cols = tuple(self.colours)
        if len(cols) != self.base.size:
            raise ColourError("one colour per boundary point required")
        pal.check_word(cols)
        for a, b in self.base.pairs:
            if cols[b] != pal.w(cols[a]):
                raise ColourError(f"arc ({a}, {b}) is not omega-compatible", a)
        orbits = tuple(sorted((pal.orbit(c) for c in self.closed_orbits), key=pal.colours.index))
        if len(orbits) != self.base.closed:
            raise ColourError("closed_orbits must have one entry per loop")
        object.__setattr__(self, "colours", cols)
        object.__setattr__(self, "closed_orbits", orbits)

    @property
    def m(self) -> int:
        return self.base.m

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def input_type(self) -> Tuple[str, ...]:
        w = self.palette.w
        return tuple(w(c) for c in self.colours[: self.m])

    @property
    def output_type(self) -> Tuple[str, ...]:
        return self.colours[self.m:]

    def __str__(self):
        return format_coloured(self)


def colour_diagram(palette: Palette, base: BrauerDiagram, input_type: Sequence[str],
                   output_type: Sequence[str], closed_orbits: Sequence[str] = ()) -> ColouredDiagram:
    w = palette.w
    cols = tuple(w(c) for c in input_type) + tuple(output_type)
    return ColouredDiagram(base, cols, tuple(closed_orbits), palette)


def coloured_empty(palette: Palette) -> ColouredDiagram:
    return ColouredDiagram(BrauerDiagram(0, 0, ()), (), (), palette)


def coloured_identity(palette: Palette, word: Sequence[str]) -> ColouredDiagram:
    n = len(word)
    base = BrauerDiagram(n, n, tuple((i, n + i) for i in range(n)))
    return colour_diagram(palette, base, word, word)


def coloured_permutation(palette: Palette, word: Sequence[str], p: Permutation) -> ColouredDiagram:
    """Strand ``i`` of ``word`` moves to position ``p(i)``."""
    out = [None] * len(word)
    for i, c in enumerate(word):
        out[p(i)] = c
    return colour_diagram(palette, permutation_diagram(p), word, out)


def coloured_cup(palette: Palette, c: str) -> ColouredDiagram:
    """``0 -> (c, omega c)``."""
    return colour_diagram(palette, BrauerDiagram(0, 2, ((0, 1),)), (), (c, palette.w(c)))


def coloured_cap(palette: Palette, c: str) -> ColouredDiagram:
    """``(c, omega c) -> 0``."""
    return colour_diagram(palette, BrauerDiagram(2, 0, ((0, 1),)), (c, palette.w(c)), ())


def coloured_sym(palette: Palette, c: str, d: str) -> ColouredDiagram:
    """``(c, d) -> (d, c)``."""
    return colour_diagram(palette, BrauerDiagram(2, 2, ((0, 3), (1, 2))), (c, d), (d, c))


def coloured_loop(palette: Palette, orbits: Sequence[str]) -> ColouredDiagram:
    return ColouredDiagram(BrauerDiagram(0, 0, (), len(orbits)), (), tuple(orbits), palette)


def coloured_compose(f: ColouredDiagram, g: ColouredDiagram) -> ColouredDiagram:
    """``g o f``; the output word of ``f`` must equal the input word of ``g``."""
    if f.palette != g.palette:
        raise ColourError("palette mismatch")
    if f.n != g.m:
        raise ArityError(f"cannot compose {f.m}->{f.n} with {g.m}->{g.n}")
    out_f, in_g = f.output_type, g.input_type
    for i, (a, b) in enumerate(zip(out_f, in_g)):
        if a != b:
            raise ColourError(f"type mismatch at index {i}: {a!r} vs {b!r}", i)
    pal = f.palette
    base = compose(f.base, g.base)
    new = [pal.orbit(out_f[cyc[0]]) for cyc in middle_cycles(f.base, g.base)]
    cols = f.colours[: f.m] + g.colours[g.m:]
    return ColouredDiagram(base, cols, f.closed_orbits + g.closed_orbits + tuple(new), pal)


def coloured_oplus(f: ColouredDiagram, g: ColouredDiagram) -> ColouredDiagram:
    if f.palette != g.palette:
        raise ColourError("palette mismatch")
    cols = f.colours[: f.m] + g.colours[: g.m] + f.colours[f.m:] + g.colours[g.m:]
    return ColouredDiagram(oplus(f.base, g.base), cols, f.closed_orbits + g.closed_orbits, f.palette)


def dual_object(palette: Palette, word: Sequence[str]) -> Tuple[str, ...]:
    """Reverse the word and apply omega letterwise."""
    return tuple(palette.w(c) for c in reversed(word))


def walled_normal_form(word: Sequence[str]) -> Tuple[Tuple[str, ...], Permutation]:
    """Stable partition of an oriented word, ups first.

    The shuffle sends position ``i`` of ``word`` to its position in the
    normal form.

    >>> walled_normal_form(["+", "-", "+", "-"])[1].cycles()
    [(2, 3)]
    """
    ups = [i for i, c in enumerate(word) if is_up(c)]
    downs = [i for i, c in enumerate(word) if not is_up(c)]
    order = ups + downs
    img = [0] * len(word)
    for new, old in enumerate(order):
        img[old] = new
    return tuple(word[i] for i in order), Permutation(tuple(img))


def walled_conjugate(f: ColouredDiagram) -> ColouredDiagram:
    """Conjugate ``f`` by walled shuffles of its input and output words."""
    pal = f.palette
    nf_in, p_in = walled_normal_form(f.input_type)
    _, p_out = walled_normal_form(f.output_type)
    pre = coloured_permutation(pal, nf_in, p_in.inverse())
    post = coloured_permutation(pal, f.output_type, p_out)
    return coloured_compose(coloured_compose(pre, f), post)


def palette_pushforward(phi: Mapping[str, str], f: ColouredDiagram, target: Palette) -> ColouredDiagram:
    """Recolour along an omega-equivariant map of palettes."""
    src = f.palette
    for c in src.colours:
        if c not in phi:
            raise ColourError(f"map undefined at {c!r}")
        if phi[src.w(c)] != target.w(phi[c]):
            raise ColourError(f"map is not omega-equivariant at {c!r}")
    cols = tuple(phi[c] for c in f.colours)
    orbits = tuple(phi[c] for c in f.closed_orbits)
    return ColouredDiagram(f.base, cols, orbits, target)


# --------------------------------------------------------------------------
# text form

_CHEAD = re.compile(r"\s*(\d+)\s*->\s*(\d+)\s*:\s*")
_CTOKEN = re.compile(r"\(\s*([st]\d+):([^\s()\[\]]+)\s+([st]\d+):([^\s()\[\]]+)\s*\)|\+((?:\s*\[[^\]\s]+\])+)|(\S)")


def format_coloured(f: ColouredDiagram) -> str:
    """``m->n : (s1:c t1:c)... + [c] [d]``; each arc lists both end colours."""
    b = f.base
    body = "".join(
        f"({b.point_name(x)}:{f.colours[x]} {b.point_name(y)}:{f.colours[y]})" for x, y in b.pairs
    )
    head = f"{b.m}->{b.n} :"
    if body:
        head += " " + body
    if f.closed_orbits:
        head += " + " + " ".join(f"[{c}]" for c in f.closed_orbits)
    return head


def parse_coloured(text: str, palette: Palette) -> ColouredDiagram:
    from .diagram import _point_index

    mt = _CHEAD.match(text)
    if not mt:
        raise ValueError(f"expected 'm->n :' at start of {text!r}")
    m, n = int(mt.group(1)), int(mt.group(2))
    rest = text[mt.end():]
    pairs, cols, orbits = [], [None] * (m + n), []
    for g in _CTOKEN.finditer(rest):
        if g.group(6):
            raise ValueError(f"unexpected {g.group(6)!r} at offset {mt.end() + g.start()}")
        if g.group(5) is not None:
            if rest[g.end():].strip():
                raise ValueError("closed orbits must come last")
            orbits = re.findall(r"\[([^\]\s]+)\]", g.group(5))
            continue
        a = _point_index(g.group(1), m, n)
        b = _point_index(g.group(3), m, n)
        pairs.append((a, b))
        cols[a], cols[b] = g.group(2), g.group(4)
    if any(c is None for c in cols):
        raise ValueError("every boundary point needs a colour")
    return ColouredDiagram(BrauerDiagram(m, n, tuple(pairs), len(orbits)), tuple(cols), tuple(orbits), palette)
