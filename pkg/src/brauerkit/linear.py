"""Linear Brauer categories.

``Br_t`` has the open diagrams ``m -> n`` as a basis over ``Q[t]``, and a
composite that creates ``k`` loops picks up ``t^k``. ``Br_delta`` is the same
with ``t`` specialised to a rational ``delta``. A :class:`LinDiagram` carries
``delta=None`` for the generic category.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .diagram import (
    ArityError,
    BrauerDiagram,
    Permutation,
    cap,
    cap_n,
    coev,
    compose,
    cup,
    enumerate_diagrams,
    identity,
    loop,
    oplus,
    oplus_all,
    permutation_diagram,
    sym,
)
from .exactlin import T, EchelonBasis, ExactMatrix, LinComb, Poly, as_scalar, specialize as _specialize

__all__ = [
    "LinDiagram",
    "lin_compose",
    "lin_oplus",
    "specialize",
    "antisymmetrizer",
    "symmetrizer",
    "coev_antisymmetrizer",
    "bend_down",
    "IdealSlice",
    "ideal_saturate",
    "elementary_layers",
    "factors_through_T_delta",
    "hom_basis",
]


def _loop_value(delta, k: int):
    if k == 0:
        return Fraction(1)
    return (T if delta is None else Fraction(delta)) ** k


class LinDiagram:
    """A linear combination of open diagrams ``m -> n``.

    ``delta`` is the bubble value, or None for the generic parameter ``t``.
    """

    __slots__ = ("m", "n", "terms", "delta")

    def __init__(self, m: int, n: int, terms: Optional[LinComb] = None, delta=None):
        self.m, self.n = m, n
        self.delta = None if delta is None else Fraction(delta)
        terms = terms or LinComb()
        if self.delta is not None:
            terms = _specialize(terms, self.delta)
        for d, _ in terms:
            if d.closed or (d.m, d.n) != (m, n):
                raise ValueError(f"basis element {d} is not an open {m}->{n} diagram")
        self.terms = terms

    @classmethod
    def of(cls, f: BrauerDiagram, delta=None, coeff=1) -> "LinDiagram":
        """The image of a diagram: loops become powers of ``t`` (or ``delta``)."""
        c = as_scalar(coeff) * _loop_value(delta, f.closed)
        return cls(f.m, f.n, LinComb({f.open_part(): c}), delta)

    @classmethod
    def zero(cls, m: int, n: int, delta=None) -> "LinDiagram":
        return cls(m, n, LinComb(), delta)

    def _check(self, other: "LinDiagram"):
        if self.delta != other.delta:
            raise ValueError(f"ring mismatch: delta={self.delta} vs {other.delta}")

    def __add__(self, other: "LinDiagram") -> "LinDiagram":
        self._check(other)
        if (self.m, self.n) != (other.m, other.n):
            raise ArityError("cannot add diagrams of different arity")
        return LinDiagram(self.m, self.n, self.terms + other.terms, self.delta)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "LinDiagram":
        return LinDiagram(self.m, self.n, self.terms.scale(c), self.delta)

    def __rmul__(self, c):
        if isinstance(c, (int, Fraction, Poly)):
            return self.scale(c)
        return NotImplemented

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, LinDiagram):
            return NotImplemented
        return (self.m, self.n, self.delta) == (other.m, other.n, other.delta) and self.terms == other.terms

    def __hash__(self):
        return hash((self.m, self.n, self.delta, self.terms))

    def __iter__(self):
        return iter(sorted(self.terms.terms.items()))

    def coefficient(self, f: BrauerDiagram):
        return self.terms[f]

    def to_vector(self, index: Dict[BrauerDiagram, int]) -> Dict[int, Fraction]:
        out = {}
        for d, c in self.terms:
            if isinstance(c, Poly):
                raise ValueError("vectors need rational coefficients")
            out[index[d]] = c
        return out

    def __repr__(self):
        inner = " + ".join(f"{c}*[{d}]" for d, c in self) or "0"
        ring = "t" if self.delta is None else f"delta={self.delta}"
        return f"LinDiagram({self.m}->{self.n}, {ring}: {inner})"


def lin_compose(x: LinDiagram, y: LinDiagram) -> LinDiagram:
    """``y o x`` extended bilinearly."""
    x._check(y)
    if x.n != y.m:
        raise ArityError(f"cannot compose {x.m}->{x.n} with {y.m}->{y.n}")
    acc: Dict[BrauerDiagram, object] = {}
    for f, a in x.terms:
        for g, b in y.terms:
            h = compose(f, g)
            key = h.open_part()
            acc[key] = acc.get(key, 0) + a * b * _loop_value(x.delta, h.closed)
    return LinDiagram(x.m, y.n, LinComb(acc), x.delta)


def lin_oplus(x: LinDiagram, y: LinDiagram) -> LinDiagram:
    x._check(y)
    acc: Dict[BrauerDiagram, object] = {}
    for f, a in x.terms:
        for g, b in y.terms:
            key = oplus(f, g)
            acc[key] = acc.get(key, 0) + a * b
    return LinDiagram(x.m + y.m, x.n + y.n, LinComb(acc), x.delta)


def specialize(x: LinDiagram, delta) -> LinDiagram:
    """Image of a ``Br_t`` element in ``Br_delta``."""
    if x.delta is not None:
        raise ValueError("already specialised")
    return LinDiagram(x.m, x.n, x.terms, delta)


def antisymmetrizer(k: int, delta=None) -> LinDiagram:
    """``e(k)``: the signed sum of all permutation diagrams on ``k`` strands."""
    acc = {}
    for imgs in permutations(range(k)):
        p = Permutation(imgs)
        acc[permutation_diagram(p)] = p.sign()
    return LinDiagram(k, k, LinComb(acc), delta)


def symmetrizer(k: int, delta=None) -> LinDiagram:
    acc = {permutation_diagram(Permutation(imgs)): 1 for imgs in permutations(range(k))}
    return LinDiagram(k, k, LinComb(acc), delta)


def coev_antisymmetrizer(k: int, delta=None) -> LinDiagram:
    """``sum sgn(s) coev(s)``, an element of ``Br(0, 2k)``."""
    acc = {}
    for imgs in permutations(range(k)):
        p = Permutation(imgs)
        acc[coev(permutation_diagram(p))] = p.sign()
    return LinDiagram(0, 2 * k, LinComb(acc), delta)


def bend_down(x: LinDiagram) -> LinDiagram:
    """Undo :func:`coev` on ``0 -> 2k``: ``(id_k + cap_k) o (x + id_k)``."""
    k = x.n // 2

    pad = LinDiagram.of(identity(k), x.delta)
    y = lin_oplus(x, pad)
    close = LinDiagram.of(oplus(identity(k), cap_n(k)), x.delta)
    return lin_compose(y, close)


def hom_basis(m: int, n: int) -> List[BrauerDiagram]:
    return enumerate_diagrams(m, n, 0)


# --------------------------------------------------------------------------
# ideal saturation


@lru_cache(maxsize=None)
def elementary_layers(k: int) -> Tuple[BrauerDiagram, ...]:
    """Diagrams ``id_a + g + id_b`` with source arity ``k``, for ``g`` in
    ``sym``, ``cap``, ``cup``."""
    out = []
    for a in range(k - 1):
        out.append(oplus_all(identity(a), sym(), identity(k - a - 2)))
        out.append(oplus_all(identity(a), cap(), identity(k - a - 2)))
    for a in range(k + 1):
        out.append(oplus_all(identity(a), cup(), identity(k - a)))
    return tuple(out)


class IdealSlice:
    """Echelon bases of an ideal in every ``Br_delta(m, n)`` with ``m+n <= bound``."""

    def __init__(self, bound: int, delta):
        self.bound = bound
        self.delta = Fraction(delta)
        self.bases: Dict[Tuple[int, int], List[BrauerDiagram]] = {}
        self.index: Dict[Tuple[int, int], Dict[BrauerDiagram, int]] = {}
        self.slices: Dict[Tuple[int, int], EchelonBasis] = {}
        for total in range(0, bound + 1, 2):
            for m in range(total + 1):
                key = (m, total - m)
                basis = hom_basis(*key)
                self.bases[key] = basis
                self.index[key] = {d: i for i, d in enumerate(basis)}
                self.slices[key] = EchelonBasis(len(basis))

    def dim(self, m: int, n: int) -> int:
        return self.slices[(m, n)].rank if (m, n) in self.slices else 0

    def dims(self) -> Dict[Tuple[int, int], int]:
        return {k: v.rank for k, v in sorted(self.slices.items())}

    def vector(self, x: LinDiagram) -> Dict[int, Fraction]:
        return x.to_vector(self.index[(x.m, x.n)])

    def lin(self, key: Tuple[int, int], vec: Dict[int, Fraction]) -> LinDiagram:
        basis = self.bases[key]
        return LinDiagram(key[0], key[1], LinComb({basis[i]: c for i, c in vec.items()}), self.delta)

    def contains(self, x: LinDiagram) -> bool:
        if x.m + x.n > self.bound:
            raise ValueError("outside the saturation bound")
        if (x.m + x.n) % 2:
            return not x
        return self.slices[(x.m, x.n)].contains(self.vector(x))

    def basis(self, m: int, n: int) -> List[LinDiagram]:
        return [self.lin((m, n), r) for r in self.slices[(m, n)].basis_rows()]

    def subspace(self, m: int, n: int) -> EchelonBasis:
        return self.slices[(m, n)]


def ideal_saturate(generators: Iterable[LinDiagram], delta, bound: int) -> IdealSlice:
    """Least truncated two-sided ideal of ``Br_delta`` containing ``generators``.

    Closure is taken under composition on either side with elementary layers
    ``id + g + id`` (``g`` a generator of BD), padding by ``id_1`` on either
    side and the partial trace of the last strand, never leaving
    ``m + n <= bound``. Every open diagram is a product of elementary layers
    whose intermediate arities stay between its own, so this is closure under
    composition with all diagrams in the bound. The trace is a composite too,
    so it adds nothing to the true ideal; it reaches elements whose
    derivation passes through hom-sets beyond the bound.
    """
    ideal = IdealSlice(bound, delta)
    dval = ideal.delta
    cache: Dict[Tuple, List[Tuple[int, int]]] = {}

    def table(key, op, layer):
        # image of every basis diagram of `key` under one operation:
        # list of (target index, loops)
        ck = (key, op, layer)
        if ck in cache:
            return cache[ck]
        m, n = key
        basis = ideal.bases[key]
        if op == "post":
            tgt = (m, layer.n)
            res = [compose(f, layer) for f in basis]
        elif op == "pre":
            tgt = (layer.m, n)
            res = [compose(layer, f) for f in basis]
        elif op == "trace":
            tgt = (m - 1, n - 1)
            pre = oplus(identity(m - 1), cup())
            post = oplus(identity(n - 1), cap())
            res = [compose(compose(pre, oplus(f, identity(1))), post) for f in basis]
        elif op == "left":
            tgt = (m + 1, n + 1)
            res = [oplus(identity(1), f) for f in basis]
        else:
            tgt = (m + 1, n + 1)
            res = [oplus(f, identity(1)) for f in basis]
        idx = ideal.index[tgt]
        out = [(idx[h.open_part()], h.closed) for h in res]
        cache[ck] = (tgt, out)
        return cache[ck]

    powers = [Fraction(1)] + [dval ** k for k in range(1, bound + 1)]

    def apply(key, vec, op, layer):
        tgt, tab = table(key, op, layer)
        out: Dict[int, Fraction] = {}
        sl = ideal.slices[tgt]
        if sl.rank == sl.dim:
            return tgt, out
        for i, c in vec.items():
            j, k = tab[i]
            v = out.get(j, 0) + c * powers[k]
            if v:
                out[j] = v
            else:
                out.pop(j, None)
        return tgt, out

    queue: List[Tuple[Tuple[int, int], Dict[int, Fraction]]] = []

    def push(key, vec):
        sl = ideal.slices[key]
        if sl.rank == sl.dim:
            return
        if vec and sl.add(vec):
            queue.append((key, vec))

    for g in generators:
        if g.m + g.n > bound:
            raise ValueError(f"generator {g.m}->{g.n} exceeds bound {bound}")
        if g.delta != dval:
            g = LinDiagram(g.m, g.n, g.terms, dval)
        push((g.m, g.n), ideal.vector(g))

    while queue:
        key, vec = queue.pop()
        m, n = key
        ops = []
        for layer in elementary_layers(n):
            if m + layer.n <= bound:
                ops.append(("post", layer))
        for k in range(max(m - 2, 0), m + 3):
            if k + n > bound:
                continue
            for layer in elementary_layers(k):
                if layer.n == m:
                    ops.append(("pre", layer))
        if m and n:
            ops.append(("trace", None))
        if m + n + 2 <= bound:
            ops.append(("left", None))
            ops.append(("right", None))
        for op, layer in ops:
            push(*apply(key, vec, op, layer))
    return ideal


def factors_through_T_delta(evaluate: Callable[[BrauerDiagram], ExactMatrix], delta,
                            samples: Sequence[BrauerDiagram] = ()) -> bool:
    """Whether a monoidal functor on diagrams sends the loop to ``delta``.

    ``samples`` are optionally checked to satisfy ``A(f) = delta^k A(open f)``.
    """
    delta = Fraction(delta)
    if evaluate(loop(1)) != ExactMatrix.scalar(delta):
        return False
    for f in samples:
        if evaluate(f) != evaluate(f.open_part()).scale(delta ** f.closed):
            return False
    return True
