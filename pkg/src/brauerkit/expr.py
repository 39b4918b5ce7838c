"""A small language for diagrams and their linear combinations.

Grammar (whitespace is insignificant)::

    expr  := term ('+' term)*
    term  := [coef '·'] comp
    comp  := hsum ('*' hsum)*          a * b applies b first, like a∘b
    hsum  := atom ('++' atom)*
    atom  := 'id(' n ')' | 'cup' | 'cap' | 'sym'
           | 'perm' ['[' n ']'] cycle+        cycle := '(' int* ')'
           | 'e(' k ')' | 's(' k ')'          antisymmetrizer, symmetrizer
           | 'cup[' c ']' | 'cap[' c ']' | 'sym[' c c ']' | 'id[' c* ']'
           | '{' literal '}' | NAME | '(' expr ')'
    coef  := int | int '/' int | '(' polynomial in t ')'

A whole input that starts with ``m->n`` is read as a bare literal.
:func:`format_expr` prints the canonical text of a syntax tree, and
``parse(format_expr(x)) == x`` for every tree it can print.

>>> elaborate(parse("(cap ++ id(1)) * (id(1) ++ cup)"))
BrauerDiagram.parse('1->1 : (s1 t1)')
>>> format_expr(parse("3/2 · sym+(-1)·id(2)"))
'3/2·sym + (-1)·id(2)'
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Tuple, Union

from .diagram import (
    BrauerDiagram,
    Permutation,
    cap,
    compose,
    cup,
    format_diagram,
    identity,
    oplus,
    parse_diagram,
    permutation_diagram,
    sym,
)
from .exactlin import Poly, as_scalar, format_scalar
from .linear import LinDiagram, antisymmetrizer, lin_compose, lin_oplus, symmetrizer
from .palette import (
    ColouredDiagram,
    Palette,
    coloured_cap,
    coloured_compose,
    coloured_cup,
    coloured_identity,
    coloured_oplus,
    coloured_sym,
    format_coloured,
    parse_coloured,
)

__all__ = [
    "ParseError",
    "ElaborationError",
    "Atom",
    "Literal",
    "Name",
    "Compose",
    "HSum",
    "Term",
    "Sum",
    "parse",
    "format_expr",
    "elaborate",
    "parse_scalar",
    "format_lin",
    "random_expression",
    "random_literal",
    "check_round_trip",
]


class ParseError(ValueError):
    """Syntax error at character offset ``pos``."""

    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


class ElaborationError(ValueError):
    """Arity, colour or environment error while building a diagram."""


# --------------------------------------------------------------------------
# syntax tree


@dataclass(frozen=True)
class Atom:
    """A built-in generator.

    ``kind`` is one of ``id cup cap sym perm e s``; ``args`` holds the
    arity, the permutation (size, cycles) or the colours.
    ``coloured`` marks the bracketed forms ``cup[c]`` etc.
    """

    kind: str
    args: Tuple = ()
    coloured: bool = False


@dataclass(frozen=True)
class Literal:
    """A diagram written out; ``text`` is its canonical form."""

    text: str
    coloured: bool = False


@dataclass(frozen=True)
class Name:
    name: str


@dataclass(frozen=True)
class Compose:
    parts: Tuple


@dataclass(frozen=True)
class HSum:
    parts: Tuple


@dataclass(frozen=True)
class Term:
    coef: object
    body: object


@dataclass(frozen=True)
class Sum:
    terms: Tuple


Node = Union[Atom, Literal, Name, Compose, HSum, Term, Sum]


# --------------------------------------------------------------------------
# scalars

_SCALAR_TOKEN = re.compile(r"\s*(?:(\d+)(?:/(\d+))?(t(?:\^(\d+))?)?|(t)(?:\^(\d+))?|([+-]))")


def parse_scalar(text: str):
    """Read an integer, a fraction or a polynomial in ``t``.

    >>> parse_scalar("t^2 - 2t + 1/2")
    Poly(t^2 - 2t + 1/2)
    """
    s = text.strip()
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    pos, acc, sign, need_term = 0, Poly(), 1, True
    while pos < len(s):
        if s[pos].isspace():
            pos += 1
            continue
        mt = _SCALAR_TOKEN.match(s, pos)
        if not mt or mt.end() == pos:
            raise ParseError(f"bad scalar {text!r}", pos)
        if mt.group(7):
            if not need_term and mt.group(7):
                sign = 1 if mt.group(7) == "+" else -1
                need_term = True
            elif need_term and mt.group(7) == "-" and acc == Poly() and sign == 1:
                sign = -1
            else:
                raise ParseError(f"unexpected sign in {text!r}", pos)
        else:
            if not need_term:
                raise ParseError(f"missing operator in {text!r}", pos)
            if mt.group(1) is not None:
                c = Fraction(int(mt.group(1)), int(mt.group(2) or 1))
                k = 0
                if mt.group(3):
                    k = int(mt.group(4) or 1)
            else:
                c, k = Fraction(1), int(mt.group(6) or 1)
            acc = acc + Poly.monomial(k, sign * c)
            sign, need_term = 1, False
        pos = mt.end()
    if need_term:
        raise ParseError(f"incomplete scalar {text!r}", len(s))
    return as_scalar(acc)


# --------------------------------------------------------------------------
# parser

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<pp>\+\+)
  | (?P<num>\d+(?:/\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<sym>[-+*()\[\]{}·^/])
""", re.VERBOSE)

_KEYWORDS = {"id", "cup", "cap", "sym", "perm", "e", "s", "t"}


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = []
        pos = 0
        while pos < len(text):
            mt = _TOKEN.match(text, pos)
            if not mt:
                raise ParseError(f"unexpected character {text[pos]!r}", pos)
            kind = mt.lastgroup
            if mt.group(0) == "{":
                end = text.find("}", pos)
                if end < 0:
                    raise ParseError("unterminated literal", pos)
                self.toks.append(("lit", text[pos + 1:end], pos + 1))
                pos = end + 1
                continue
            if kind != "ws":
                self.toks.append((kind, mt.group(0), pos))
            pos = mt.end()
        self.i = 0

    # token helpers

    def peek(self, k: int = 0):
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else ("eof", "", len(self.text))

    def pos(self) -> int:
        return self.peek()[2]

    def take(self, value: Optional[str] = None, kind: Optional[str] = None):
        tok = self.peek()
        if (value is not None and tok[1] != value) or (kind is not None and tok[0] != kind):
            want = value if value is not None else kind
            got = tok[1] or "end of input"
            raise ParseError(f"expected {want!r}, found {got!r}", tok[2])
        self.i += 1
        return tok

    def at(self, value: str) -> bool:
        return self.peek()[1] == value

    # grammar

    def expr(self):
        terms = [self.term()]
        while self.at("+"):
            self.take("+")
            terms.append(self.term())
        if len(terms) == 1:
            return terms[0]
        return Sum(tuple(terms))

    def term(self):
        start = self.i
        coef = self.try_coef()
        if coef is not None:
            return Term(coef, self.comp())
        self.i = start
        return self.comp()

    def try_coef(self):
        """A coefficient followed by ``·``, or None (position unchanged)."""
        tok = self.peek()
        if tok[0] == "num":
            self.take()
            self.take("·")
            return as_scalar(Fraction(tok[1]))
        if tok[1] != "(":
            return None
        depth, j = 0, self.i
        while True:
            if j >= len(self.toks):
                raise ParseError("unbalanced parenthesis", tok[2])
            v = self.toks[j][1]
            depth += v == "("
            depth -= v == ")"
            j += 1
            if depth == 0:
                break
        if j >= len(self.toks) or self.toks[j][1] != "·":
            return None
        value = parse_scalar(self.text[tok[2]:self.toks[j - 1][2] + 1])
        self.i = j + 1
        return value

    def comp(self):
        parts = [self.hsum()]
        while self.at("*"):
            self.take("*")
            parts.append(self.hsum())
        return parts[0] if len(parts) == 1 else Compose(tuple(parts))

    def hsum(self):
        parts = [self.atom()]
        while self.peek()[0] == "pp":
            self.take(kind="pp")
            parts.append(self.atom())
        return parts[0] if len(parts) == 1 else HSum(tuple(parts))

    def int_arg(self) -> int:
        tok = self.take(kind="num")
        if "/" in tok[1]:
            raise ParseError("expected an integer", tok[2])
        return int(tok[1])

    def colours(self, closer: str = "]"):
        out = []
        while not self.at(closer):
            tok = self.peek()
            if tok[0] in ("name", "num") or tok[1] in "+-":
                out.append(self.take()[1])
            else:
                raise ParseError(f"bad colour {tok[1]!r}", tok[2])
        self.take(closer)
        return tuple(out)

    def atom(self):
        tok = self.peek()
        kind, value, pos = tok
        if value == "(":
            self.take("(")
            inner = self.expr()
            self.take(")")
            return inner
        if kind == "lit":
            self.take()
            return _literal(value, pos)
        if kind != "name":
            raise ParseError(f"expected a diagram, found {value or 'end of input'!r}", pos)
        self.take()
        if value in ("cup", "cap", "sym", "id") and self.at("["):
            self.take("[")
            cols = self.colours()
            want = {"cup": 1, "cap": 1, "sym": 2}.get(value)
            if want is not None and len(cols) != want:
                raise ParseError(f"{value}[...] takes {want} colour(s)", pos)
            return Atom(value, cols, True)
        if value in ("cup", "cap", "sym"):
            return Atom(value)
        if value in ("id", "e", "s"):
            self.take("(")
            n = self.int_arg()
            self.take(")")
            return Atom(value, (n,))
        if value == "perm":
            size = None
            if self.at("["):
                self.take("[")
                size = self.int_arg()
                self.take("]")
            cycles = []
            while self.at("("):
                self.take("(")
                cyc = []
                while not self.at(")"):
                    cyc.append(self.int_arg())
                self.take(")")
                cycles.append(tuple(cyc))
            if not cycles:
                raise ParseError("perm needs at least one cycle", self.pos())
            top = max((x for c in cycles for x in c), default=0)
            if size is None:
                size = top
            if top > size or any(x < 1 for c in cycles for x in c):
                raise ParseError(f"cycle entry out of range 1..{size}", pos)
            try:
                p = Permutation.from_cycles(size, cycles)
            except ValueError as exc:
                raise ParseError(str(exc), pos) from None
            return Atom("perm", (size, tuple(p.cycles())))
        if value in _KEYWORDS:
            raise ParseError(f"reserved word {value!r}", pos)
        return Name(value)


def _literal(text: str, pos: int) -> Literal:
    coloured = re.search(r"[st]\d+\s*:", text) is not None or "[" in text
    try:
        if coloured:
            # canonical spacing without knowing the palette
            canon = re.sub(r"\s+", " ", text.strip())
            canon = re.sub(r"\s*->\s*", "->", canon)
            canon = re.sub(r"\s*:\s*(?=\(|\+|$)", " : ", canon, count=1)
            canon = re.sub(r"\)\s+\(", ")(", canon)
            canon = re.sub(r"\(\s+", "(", canon)
            canon = re.sub(r"\s+\)", ")", canon)
            return Literal(canon.strip(), True)
        return Literal(format_diagram(parse_diagram(text)))
    except ValueError as exc:
        raise ParseError(f"bad literal: {exc}", pos) from None


def parse(text: str) -> Node:
    """Parse an expression or a bare literal diagram."""
    if re.match(r"\s*\d+\s*->", text):
        return _literal(text, 0)
    p = _Parser(text)
    node = p.expr()
    if p.peek()[0] != "eof":
        tok = p.peek()
        raise ParseError(f"unexpected {tok[1]!r}", tok[2])
    return node


# --------------------------------------------------------------------------
# printer


def format_expr(node: Node, top: bool = True) -> str:
    if isinstance(node, Literal):
        return node.text if top else "{" + node.text + "}"
    if isinstance(node, Name):
        return node.name
    if isinstance(node, Atom):
        if node.coloured:
            return f"{node.kind}[{' '.join(node.args)}]"
        if node.kind in ("cup", "cap", "sym"):
            return node.kind
        if node.kind == "perm":
            size, cycles = node.args
            body = "".join("(" + " ".join(map(str, c)) + ")" for c in cycles) or "()"
            return f"perm[{size}]{body}"
        return f"{node.kind}({node.args[0]})"
    if isinstance(node, HSum):
        return " ++ ".join(_wrap(p, (HSum, Compose, Term, Sum)) for p in node.parts)
    if isinstance(node, Compose):
        return " * ".join(_wrap(p, (Compose, Term, Sum)) for p in node.parts)
    if isinstance(node, Term):
        return format_scalar(node.coef) + "·" + _wrap(node.body, (Term, Sum))
    if isinstance(node, Sum):
        return " + ".join(_wrap(t, (Sum,)) for t in node.terms)
    raise TypeError(f"not an expression node: {node!r}")


def _wrap(node: Node, kinds) -> str:
    s = format_expr(node, top=False)
    return f"({s})" if isinstance(node, kinds) else s


# --------------------------------------------------------------------------
# elaboration


def elaborate(node: Node, env: Optional[Mapping[str, object]] = None,
              palette: Optional[Palette] = None, delta=None):
    """Build the denoted diagram.

    Returns a :class:`BrauerDiagram` when the expression is a single
    diagram, a :class:`LinDiagram` (over ``Br_t``, or ``Br_delta`` when
    ``delta`` is given) when it involves coefficients, sums, ``e(k)`` or
    ``s(k)``, and a :class:`ColouredDiagram` when ``palette`` is given.
    """
    env = dict(env or {})
    if palette is not None:
        return _elab_coloured(node, env, palette)
    val = _elab(node, env, delta)
    return val


def _as_lin(x, delta) -> LinDiagram:
    if isinstance(x, LinDiagram):
        return x
    return LinDiagram.of(x, delta)


def _elab(node, env, delta):
    if isinstance(node, Literal):
        if node.coloured:
            raise ElaborationError("coloured literal needs a palette")
        return parse_diagram(node.text)
    if isinstance(node, Name):
        if node.name not in env:
            raise ElaborationError(f"unknown name {node.name!r}")
        return env[node.name]
    if isinstance(node, Atom):
        if node.coloured:
            raise ElaborationError(f"{format_expr(node)} needs a palette")
        k = node.kind
        if k == "id":
            return identity(node.args[0])
        if k == "cup":
            return cup()
        if k == "cap":
            return cap()
        if k == "sym":
            return sym()
        if k == "perm":
            size, cycles = node.args
            return permutation_diagram(Permutation.from_cycles(size, cycles))
        if k == "e":
            return antisymmetrizer(node.args[0], delta)
        if k == "s":
            return symmetrizer(node.args[0], delta)
    if isinstance(node, HSum):
        vals = [_elab(p, env, delta) for p in node.parts]
        return _fold(vals, oplus, lin_oplus, delta)
    if isinstance(node, Compose):
        vals = [_elab(p, env, delta) for p in reversed(node.parts)]
        return _fold(vals, _compose_checked, _lin_compose_checked, delta)
    if isinstance(node, Term):
        val = _as_lin(_elab(node.body, env, delta), delta)
        coef = node.coef
        if delta is not None and isinstance(coef, Poly):
            coef = coef(delta)
        return val.scale(coef)
    if isinstance(node, Sum):
        vals = [_as_lin(_elab(t, env, delta), delta) for t in node.terms]
        out = vals[0]
        for v in vals[1:]:
            if (v.m, v.n) != (out.m, out.n):
                raise ElaborationError(f"cannot add {out.m}->{out.n} and {v.m}->{v.n}")
            out = out + v
        return out
    raise TypeError(f"not an expression node: {node!r}")


def _compose_checked(f, g):
    if f.n != g.m:
        raise ElaborationError(f"cannot compose {f.m}->{f.n} with {g.m}->{g.n}")
    return compose(f, g)


def _lin_compose_checked(x, y):
    if x.n != y.m:
        raise ElaborationError(f"cannot compose {x.m}->{x.n} with {y.m}->{y.n}")
    return lin_compose(x, y)


def _fold(vals, plain, linear, delta):
    if all(isinstance(v, BrauerDiagram) for v in vals):
        out = vals[0]
        for v in vals[1:]:
            out = plain(out, v)
        return out
    out = _as_lin(vals[0], delta)
    for v in vals[1:]:
        out = linear(out, _as_lin(v, delta))
    return out


def _elab_coloured(node, env, pal: Palette) -> ColouredDiagram:
    if isinstance(node, Literal):
        return parse_coloured(node.text, pal)
    if isinstance(node, Name):
        if node.name not in env:
            raise ElaborationError(f"unknown name {node.name!r}")
        return env[node.name]
    if isinstance(node, Atom):
        if not node.coloured:
            raise ElaborationError(f"{format_expr(node)} has no colours; use the bracketed form")
        k, cols = node.kind, node.args
        for c in cols:
            if c not in pal.colours:
                raise ElaborationError(f"colour {c!r} not in palette")
        if k == "cup":
            return coloured_cup(pal, cols[0])
        if k == "cap":
            return coloured_cap(pal, cols[0])
        if k == "sym":
            return coloured_sym(pal, cols[0], cols[1])
        return coloured_identity(pal, cols)
    if isinstance(node, HSum):
        vals = [_elab_coloured(p, env, pal) for p in node.parts]
        out = vals[0]
        for v in vals[1:]:
            out = coloured_oplus(out, v)
        return out
    if isinstance(node, Compose):
        vals = [_elab_coloured(p, env, pal) for p in reversed(node.parts)]
        out = vals[0]
        for v in vals[1:]:
            if v.input_type != out.output_type:
                raise ElaborationError(f"cannot compose {out.output_type} with {v.input_type}")
            out = coloured_compose(out, v)
        return out
    raise ElaborationError("linear combinations of coloured diagrams are not supported")


def format_lin(x: LinDiagram) -> str:
    """A linear combination as expression text, ``0`` when empty."""
    terms = [Term(c, Literal(format_diagram(f))) for f, c in x]
    if not terms:
        return "0"
    return format_expr(terms[0] if len(terms) == 1 else Sum(tuple(terms)))


# --------------------------------------------------------------------------
# random canonical inputs


def random_literal(rng: random.Random, max_points: int = 6, palette: Optional[Palette] = None) -> Literal:
    total = rng.randrange(0, max_points + 1, 2)
    m = rng.randint(0, total)
    pts = list(range(total))
    rng.shuffle(pts)
    f = BrauerDiagram(m, total - m, tuple(zip(pts[::2], pts[1::2])), rng.randint(0, 2))
    if palette is None:
        return Literal(format_diagram(f))
    cols = [None] * total
    for a, b in f.pairs:
        c = rng.choice(palette.colours)
        cols[a], cols[b] = c, palette.w(c)
    orbits = tuple(rng.choice(palette.orbits()) for _ in range(f.closed))
    # an empty coloured diagram has the same text as an uncoloured one
    return Literal(format_coloured(ColouredDiagram(f, tuple(cols), orbits, palette)), bool(total or orbits))


def _random_coef(rng: random.Random):
    if rng.random() < 0.3:
        coeffs = [Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(rng.randint(2, 4))]
        coeffs[-1] = coeffs[-1] or Fraction(1)
        return as_scalar(Poly(coeffs))
    return Fraction(rng.randint(-9, 9), rng.choice([1, 1, 2, 3]))


def _random_name(rng: random.Random) -> str:
    while True:
        name = rng.choice("abfghxyzFG") + "".join(rng.choice("abc019_") for _ in range(rng.randint(0, 3)))
        if name not in _KEYWORDS:
            return name


def random_expression(rng: random.Random, depth: int = 3, palette: Optional[Palette] = None) -> Node:
    """A random syntax tree in canonical form (not necessarily well typed)."""
    if depth <= 0 or rng.random() < 0.3:
        choice = rng.randrange(9)
        if choice == 0:
            return Atom("id", (rng.randint(0, 4),))
        if choice == 1:
            return Atom(rng.choice(["cup", "cap", "sym"]))
        if choice == 2:
            size = rng.randint(1, 6)
            images = list(range(size))
            rng.shuffle(images)
            return Atom("perm", (size, tuple(Permutation(tuple(images)).cycles())))
        if choice == 3:
            return Atom(rng.choice("es"), (rng.randint(1, 4),))
        if choice == 4:
            return random_literal(rng, palette=palette)
        if choice == 5:
            return Name(_random_name(rng))
        if choice == 6 and palette is not None:
            kind = rng.choice(["cup", "cap", "sym", "id"])
            n = {"cup": 1, "cap": 1, "sym": 2}.get(kind, rng.randint(0, 3))
            return Atom(kind, tuple(rng.choice(palette.colours) for _ in range(n)), True)
        return random_literal(rng)
    kind = rng.randrange(4)
    if kind == 0:
        return Compose(tuple(random_expression(rng, depth - 1, palette) for _ in range(rng.randint(2, 3))))
    if kind == 1:
        return HSum(tuple(random_expression(rng, depth - 1, palette) for _ in range(rng.randint(2, 3))))
    if kind == 2:
        return Term(_random_coef(rng), random_expression(rng, depth - 1, palette))
    return Sum(tuple(random_expression(rng, depth - 1, palette) for _ in range(rng.randint(2, 3))))


def check_round_trip(cases: int = 1000, seed: int = 0) -> dict:
    """``parse . print`` on random trees and ``print . parse`` on their text."""
    from .palette import oriented_palette

    rng = random.Random(seed)
    pal = oriented_palette()
    failures = []
    for k in range(cases):
        node = random_expression(rng, 3, pal if k % 4 == 3 else None)
        text = format_expr(node)
        try:
            back = parse(text)
            ok = back == node and format_expr(back) == text
        except ParseError as exc:
            ok, back = False, str(exc)
        if not ok:
            failures.append({"case": k, "text": text, "parsed": repr(back)})
    lits = 0
    for k in range(cases):
        text = random_literal(rng, 8).text
        f = parse_diagram(text)
        ok = format_diagram(f) == text and format_expr(parse(text)) == text
        lits += 1
        if not ok:
            failures.append({"case": f"literal {k}", "text": text})
    return {
        "suite": "parser",
        "cases": cases,
        "literal_cases": lits,
        "seed": seed,
        "failures": len(failures),
        "first_failure": failures[0] if failures else None,
        "ok": not failures,
    }
