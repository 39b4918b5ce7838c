"""Circuit algebras as exact linear data, their axioms, and wheeled props.

A circuit algebra over a palette assigns a vector space ``A(w)`` to every
colour word ``w`` together with

* a product ``A(w1) (x) A(w2) -> A(w1 w2)``,
* a unit ``eta`` in ``A(())``,
* contractions ``zeta[i, j]: A(w) -> A(w without i, j)`` for ``w[j] = omega w[i]``,
* units ``epsilon_c`` in ``A(c, omega c)``,
* the action of adjacent transpositions ``A(w) -> A(s_i w)``.

All of these are :class:`ExactMatrix` objects; elements are columns.
Positions are 0-based throughout. A contraction joins two legs with an
unoriented arc, so ``zeta[i, j] = zeta[j, i]``.

A wheeled prop is stored the same way: ``P(m, n)`` is a vector space and
vertical composition, the monoidal product and the trace are matrices.
"""

from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from .diagram import BrauerDiagram, Permutation
from .exactlin import ExactMatrix
from .palette import (
    ColourError,
    Palette,
    colour_diagram,
    coloured_cup,
    coloured_permutation,
    is_up,
    oriented_palette,
    point_palette,
    walled_normal_form,
)

__all__ = [
    "CircuitAlgebraOracle",
    "EndomorphismCA",
    "TabulatedCA",
    "trivial_ca",
    "perturbed",
    "tabulate",
    "ca_to_json",
    "ca_from_json",
    "check_ca_axioms",
    "ModularOperad",
    "derive_modular_operad",
    "check_modular_operad",
    "WheeledPropView",
    "MatrixWheeledProp",
    "CAWheeledProp",
    "ca_to_wheeled_prop",
    "wheeled_prop_to_ca",
    "check_wheeled_prop",
    "compare_props",
    "round_trip_check",
]

Word = Tuple[str, ...]


# --------------------------------------------------------------------------
# small matrix helpers


def _swap_factors(d1: int, d2: int) -> ExactMatrix:
    """``A (x) B -> B (x) A`` for dimensions ``d1``, ``d2``."""
    M = ExactMatrix(d2 * d1, d1 * d2)
    for a in range(d1):
        for b in range(d2):
            M.data[b * d1 + a] = {a * d2 + b: Fraction(1)}
    return M


def _kron(*ms: ExactMatrix) -> ExactMatrix:
    out = ExactMatrix.identity(1)
    for m in ms:
        out = out.kron(m)
    return out


def _remove(word: Sequence[str], idxs: Sequence[int]) -> Word:
    drop = set(idxs)
    return tuple(c for k, c in enumerate(word) if k not in drop)


def _shift(i: int, removed: Sequence[int]) -> int:
    return i - sum(1 for r in removed if r < i)


def _act_word(word: Sequence[str], p: Permutation) -> Word:
    out = [None] * len(word)
    for i, c in enumerate(word):
        out[p(i)] = c
    return tuple(out)


def _adjacent_factorisation(p: Permutation) -> List[int]:
    """Adjacent transpositions ``s_k`` whose successive action realises ``p``."""
    arr = list(p.images)
    steps = []
    for end in range(len(arr) - 1, 0, -1):
        for k in range(end):
            if arr[k] > arr[k + 1]:
                arr[k], arr[k + 1] = arr[k + 1], arr[k]
                steps.append(k)
    return steps


def words(palette: Palette, max_len: int, min_len: int = 0) -> Iterator[Word]:
    for n in range(min_len, max_len + 1):
        yield from product(palette.colours, repeat=n)


class _Tally:
    """Counts checks per axiom and keeps the first failing witness."""

    def __init__(self):
        self.checks: Dict[str, dict] = {}

    def record(self, name: str, ok: bool, witness: Callable[[], dict]):
        entry = self.checks.setdefault(name, {"count": 0, "failures": 0, "first_failure": None})
        entry["count"] += 1
        if not ok:
            entry["failures"] += 1
            if entry["first_failure"] is None:
                entry["first_failure"] = witness()

    @property
    def ok(self) -> bool:
        return all(e["failures"] == 0 for e in self.checks.values())

    def report(self, **extra) -> dict:
        out = dict(extra)
        out["checks"] = {k: self.checks[k] for k in sorted(self.checks)}
        out["ok"] = self.ok
        return out


# --------------------------------------------------------------------------
# circuit algebras


class CircuitAlgebraOracle:
    """Interface; subclasses provide the five structure maps.

    ``max_grade`` bounds the word length the oracle is asked about.
    """

    palette: Palette
    max_grade: int

    def dim(self, w: Word) -> int:
        raise NotImplementedError

    def product(self, w1: Word, w2: Word) -> ExactMatrix:
        raise NotImplementedError

    def unit(self) -> ExactMatrix:
        raise NotImplementedError

    def contraction(self, w: Word, i: int, j: int) -> ExactMatrix:
        raise NotImplementedError

    def epsilon(self, c: str) -> ExactMatrix:
        raise NotImplementedError

    def transposition(self, w: Word, k: int) -> ExactMatrix:
        """Action of swapping legs ``k`` and ``k + 1``."""
        raise NotImplementedError

    # derived

    odd = False

    def factor_swap(self, a: Word, b: Word) -> ExactMatrix:
        """Symmetry ``A(a) (x) A(b) -> A(b) (x) A(a)`` of the target category.

        With ``odd`` set every leg has odd degree (super vector spaces), so
        the swap carries the Koszul sign ``(-1)^(|a| |b|)``.
        """
        M = _swap_factors(self.dim(a), self.dim(b))
        if self.odd and len(a) * len(b) % 2:
            M = -M
        return M

    def action(self, w: Word, p: Permutation) -> ExactMatrix:
        """``A(w) -> A(p.w)``; leg ``i`` moves to position ``p(i)``."""
        w = tuple(w)
        M = ExactMatrix.identity(self.dim(w))
        for k in _adjacent_factorisation(p):
            M = self.transposition(w, k) @ M
            w = w[:k] + (w[k + 1], w[k]) + w[k + 2:]
        return M

    def contract_pairs(self, w: Word, pairs: Sequence[Tuple[int, int]]) -> Tuple[ExactMatrix, Word]:
        """Contract several disjoint leg pairs, given in positions of ``w``."""
        w = tuple(w)
        M = ExactMatrix.identity(self.dim(w))
        removed: List[int] = []
        for i, j in pairs:
            a, b = _shift(i, removed), _shift(j, removed)
            M = self.contraction(w, a, b) @ M
            w = _remove(w, (a, b))
            removed += [i, j]
        return M, w

    def _check_pair(self, w: Word, i: int, j: int):
        if i == j or not (0 <= i < len(w) and 0 <= j < len(w)):
            raise IndexError(f"bad contraction legs {i}, {j} for word of length {len(w)}")
        if w[j] != self.palette.w(w[i]):
            raise ColourError(f"legs {i} and {j} of {w} are not omega-paired", j)


class EndomorphismCA(CircuitAlgebraOracle):
    """The circuit algebra ``A(w) = Hom(0, w)`` of an evaluation functor.

    ``functor`` needs ``evaluate_coloured`` and ``colour_dim``. The product
    is the Kronecker product, so its matrix is an identity. For a skew form
    the crossing evaluates to minus the swap, so the algebra lives in super
    vector spaces with ``V`` odd.
    """

    def __init__(self, functor, palette: Optional[Palette] = None, max_grade: int = 4):
        self.functor = functor
        self.palette = palette or getattr(functor, "palette", None) or point_palette()
        form = getattr(functor, "form", None)
        self.odd = form is not None and form.kind == "skew"
        self.max_grade = max_grade
        self._cache: Dict[tuple, ExactMatrix] = {}

    def _memo(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    def dim(self, w: Word) -> int:
        out = 1
        for c in w:
            out *= self.functor.colour_dim(c)
        return out

    def product(self, w1: Word, w2: Word) -> ExactMatrix:
        return ExactMatrix.identity(self.dim(tuple(w1) + tuple(w2)))

    def unit(self) -> ExactMatrix:
        return ExactMatrix.identity(1)

    def contraction(self, w: Word, i: int, j: int) -> ExactMatrix:
        w = tuple(w)
        self._check_pair(w, i, j)
        i, j = min(i, j), max(i, j)

        def build():
            n = len(w)
            rest = [k for k in range(n) if k not in (i, j)]
            pairs = [(i, j)] + [(k, n + t) for t, k in enumerate(rest)]
            base = BrauerDiagram.from_pairs(n, n - 2, pairs)
            f = colour_diagram(self.palette, base, w, _remove(w, (i, j)))
            return self.functor.evaluate_coloured(f)

        return self._memo(("zeta", w, i, j), build)

    def epsilon(self, c: str) -> ExactMatrix:
        return self._memo(("eps", c), lambda: self.functor.evaluate_coloured(coloured_cup(self.palette, c)))

    def transposition(self, w: Word, k: int) -> ExactMatrix:
        w = tuple(w)
        p = Permutation.transposition(len(w), k, k + 1)
        return self._memo(
            ("sigma", w, k),
            lambda: self.functor.evaluate_coloured(coloured_permutation(self.palette, w, p)),
        )


class TabulatedCA(CircuitAlgebraOracle):
    """A circuit algebra given by explicit tables, e.g. read from JSON.

    Missing entries raise ``KeyError``; ``overrides`` replaces individual
    contraction matrices (used to build counterexamples).
    """

    def __init__(self, palette: Palette, max_grade: int, dims: Dict[Word, int],
                 products: Dict[Tuple[Word, Word], ExactMatrix], unit: ExactMatrix,
                 contractions: Dict[Tuple[Word, int, int], ExactMatrix],
                 epsilons: Dict[str, ExactMatrix], transpositions: Dict[Tuple[Word, int], ExactMatrix]):
        self.palette = palette
        self.max_grade = max_grade
        self.dims = dims
        self.products = products
        self._unit = unit
        self.contractions = contractions
        self.epsilons = epsilons
        self.transpositions = transpositions

    def dim(self, w):
        return self.dims[tuple(w)]

    def product(self, w1, w2):
        return self.products[(tuple(w1), tuple(w2))]

    def unit(self):
        return self._unit

    def contraction(self, w, i, j):
        w = tuple(w)
        self._check_pair(w, i, j)
        return self.contractions[(w, min(i, j), max(i, j))]

    def epsilon(self, c):
        return self.epsilons[c]

    def transposition(self, w, k):
        return self.transpositions[(tuple(w), k)]


def tabulate(A: CircuitAlgebraOracle, max_grade: Optional[int] = None) -> TabulatedCA:
    """Freeze every structure map of ``A`` up to total grade ``max_grade``."""
    g = A.max_grade if max_grade is None else max_grade
    pal = A.palette
    ws = list(words(pal, g))
    dims = {w: A.dim(w) for w in ws}
    prods = {(a, b): A.product(a, b) for a in ws for b in ws if len(a) + len(b) <= g}
    contr = {}
    trans = {}
    for w in ws:
        for i in range(len(w)):
            for j in range(i + 1, len(w)):
                if w[j] == pal.w(w[i]):
                    contr[(w, i, j)] = A.contraction(w, i, j)
        for k in range(len(w) - 1):
            trans[(w, k)] = A.transposition(w, k)
    eps = {c: A.epsilon(c) for c in pal.colours} if g >= 2 else {}
    T = TabulatedCA(pal, g, dims, prods, A.unit(), contr, eps, trans)
    T.odd = A.odd
    return T


def trivial_ca(palette: Optional[Palette] = None, max_grade: int = 4) -> TabulatedCA:
    """Every ``A(w)`` is the ground field and every structure map is 1."""
    pal = palette or point_palette()
    one = ExactMatrix.identity(1)

    class _Trivial(CircuitAlgebraOracle):
        def __init__(self):
            self.palette, self.max_grade = pal, max_grade

        def dim(self, w):
            return 1

        def product(self, w1, w2):
            return one

        def unit(self):
            return one

        def contraction(self, w, i, j):
            self._check_pair(tuple(w), i, j)
            return one

        def epsilon(self, c):
            return one

        def transposition(self, w, k):
            return one

    return tabulate(_Trivial(), max_grade)


def perturbed(A: CircuitAlgebraOracle, w: Word, i: int, j: int, E: ExactMatrix) -> TabulatedCA:
    """A copy of ``A`` whose contraction ``zeta[i, j]`` on ``w`` is shifted by ``E``."""
    T = tabulate(A)
    key = (tuple(w), min(i, j), max(i, j))
    T.contractions = dict(T.contractions)
    T.contractions[key] = T.contractions[key] + E
    return T


# --------------------------------------------------------------------------
# JSON form


def _matrix_to_json(M: ExactMatrix) -> dict:
    entries = [[i, j, str(x)] for i, row in sorted(M.data.items()) for j, x in sorted(row.items())]
    return {"shape": [M.nrows, M.ncols], "entries": entries}


def _matrix_from_json(obj: dict) -> ExactMatrix:
    r, c = obj["shape"]
    M = ExactMatrix(r, c)
    for i, j, x in obj["entries"]:
        v = Fraction(x)
        if v:
            M.data.setdefault(i, {})[j] = v
    return M


def _wkey(w: Sequence[str]) -> str:
    return " ".join(w)


def _wparse(s: str) -> Word:
    return tuple(s.split())


def ca_to_json(A: CircuitAlgebraOracle, max_grade: Optional[int] = None) -> str:
    """Oracle file: dimensions and named matrices keyed by space-separated words."""
    T = tabulate(A, max_grade)
    obj = {
        "palette": json.loads(T.palette.to_json()),
        "max_grade": T.max_grade,
        "odd": T.odd,
        "dims": {_wkey(w): d for w, d in T.dims.items()},
        "unit": _matrix_to_json(T.unit()),
        "product": [[_wkey(a), _wkey(b), _matrix_to_json(M)] for (a, b), M in T.products.items()],
        "contraction": [[_wkey(w), i, j, _matrix_to_json(M)] for (w, i, j), M in T.contractions.items()],
        "epsilon": {c: _matrix_to_json(M) for c, M in T.epsilons.items()},
        "transposition": [[_wkey(w), k, _matrix_to_json(M)] for (w, k), M in T.transpositions.items()],
    }
    return json.dumps(obj, sort_keys=True)


def ca_from_json(text: str) -> TabulatedCA:
    obj = json.loads(text)
    pal = Palette.from_json(json.dumps(obj["palette"]))
    T = TabulatedCA(
        pal,
        obj["max_grade"],
        {_wparse(k): v for k, v in obj["dims"].items()},
        {(_wparse(a), _wparse(b)): _matrix_from_json(M) for a, b, M in obj["product"]},
        _matrix_from_json(obj["unit"]),
        {(_wparse(w), i, j): _matrix_from_json(M) for w, i, j, M in obj["contraction"]},
        {c: _matrix_from_json(M) for c, M in obj["epsilon"].items()},
        {(_wparse(w), k): _matrix_from_json(M) for w, k, M in obj["transposition"]},
    )
    T.odd = bool(obj.get("odd", False))
    return T


# --------------------------------------------------------------------------
# axiom checks


def _pairs(A: CircuitAlgebraOracle, w: Word) -> List[Tuple[int, int]]:
    om = A.palette.w
    return [(i, j) for i in range(len(w)) for j in range(i + 1, len(w)) if w[j] == om(w[i])]


def check_ca_axioms(A: CircuitAlgebraOracle, max_grade: Optional[int] = None) -> dict:
    """Exhaustive check of (c1)-(c3) and (e1) on all index patterns.

    (c1) covers associativity, both unit laws, symmetry of the product and
    its equivariance; the Coxeter relations of the transposition action and
    equivariance of the contractions are checked as well. Total grade of
    every pattern is at most ``max_grade``.
    """
    g = A.max_grade if max_grade is None else max_grade
    pal = A.palette
    t = _Tally()
    I = ExactMatrix.identity

    for w in words(pal, g, 2):
        n = len(w)
        D = A.dim(w)
        for k in range(n - 1):
            s = A.transposition(w, k)
            w2 = w[:k] + (w[k + 1], w[k]) + w[k + 2:]
            t.record("sigma_involution", A.transposition(w2, k) @ s == I(D),
                     lambda: {"word": list(w), "k": k})
            if k + 2 < n:
                p1 = Permutation.transposition(n, k, k + 1)
                p2 = Permutation.transposition(n, k + 1, k + 2)
                t.record("sigma_braid", A.action(w, p1 * p2 * p1) == A.action(w, p2 * p1 * p2),
                         lambda: {"word": list(w), "k": k})
        for p in permutations(range(n)):
            p = Permutation(p)
            for q in [Permutation.transposition(n, k, k + 1) for k in range(n - 1)]:
                lhs = A.action(_act_word(w, p), q) @ A.action(w, p)
                t.record("sigma_functorial", lhs == A.action(w, q * p),
                         lambda: {"word": list(w), "p": list(p.images), "q": list(q.images)})

    # (c1)
    for a, b in product(words(pal, g), repeat=2):
        if len(a) + len(b) > g:
            continue
        Da, Db = A.dim(a), A.dim(b)
        ab = a + b
        P = A.product(a, b)
        for c in words(pal, g - len(a) - len(b)):
            Dc = A.dim(c)
            lhs = A.product(ab, c) @ P.kron(I(Dc))
            rhs = A.product(a, b + c) @ I(Da).kron(A.product(b, c))
            t.record("c1_associativity", lhs == rhs,
                     lambda: {"a": list(a), "b": list(b), "c": list(c)})
        if not a:
            t.record("c1_left_unit", A.product((), b) @ A.unit().kron(I(Db)) == I(Db),
                     lambda: {"word": list(b)})
        if not b:
            t.record("c1_right_unit", A.product(a, ()) @ I(Da).kron(A.unit()) == I(Da),
                     lambda: {"word": list(a)})
        na, nb = len(a), len(b)
        swap = Permutation(tuple(nb + i for i in range(na)) + tuple(range(nb)))
        lhs = A.action(ab, swap) @ P
        rhs = A.product(b, a) @ A.factor_swap(a, b)
        t.record("c1_symmetry", lhs == rhs, lambda: {"a": list(a), "b": list(b)})
        for pa in permutations(range(na)):
            for pb in permutations(range(nb)):
                pab = Permutation(tuple(pa) + tuple(na + x for x in pb))
                Pa, Pb = Permutation(pa), Permutation(pb)
                lhs = A.action(ab, pab) @ P
                rhs = A.product(_act_word(a, Pa), _act_word(b, Pb)) @ A.action(a, Pa).kron(A.action(b, Pb))
                t.record("c1_equivariance", lhs == rhs,
                         lambda: {"a": list(a), "b": list(b), "pa": list(pa), "pb": list(pb)})

    # equivariance of contractions
    for w in words(pal, g, 2):
        n = len(w)
        for i, j in _pairs(A, w):
            Z = A.contraction(w, i, j)
            rest = [k for k in range(n) if k not in (i, j)]
            for p in permutations(range(n)):
                p = Permutation(p)
                pw = _act_word(w, p)
                lhs = A.contraction(pw, p(i), p(j)) @ A.action(w, p)
                img = sorted(p(k) for k in rest)
                q = Permutation(tuple(img.index(p(k)) for k in rest))
                rhs = A.action(_remove(w, (i, j)), q) @ Z
                t.record("zeta_equivariance", lhs == rhs,
                         lambda: {"word": list(w), "i": i, "j": j, "p": list(p.images)})

    # (c2)
    for w in words(pal, g, 4):
        ps = _pairs(A, w)
        for i, j in ps:
            for k, m in ps:
                if len({i, j, k, m}) < 4 or (i, j) >= (k, m):
                    continue
                lhs = A.contraction(_remove(w, (k, m)), _shift(i, (k, m)), _shift(j, (k, m))) @ A.contraction(w, k, m)
                rhs = A.contraction(_remove(w, (i, j)), _shift(k, (i, j)), _shift(m, (i, j))) @ A.contraction(w, i, j)
                t.record("c2", lhs == rhs,
                         lambda: {"word": list(w), "pair1": [i, j], "pair2": [k, m]})

    # (c3), contracting inside the first and inside the second factor
    for c in words(pal, g):
        for d in words(pal, g - len(c)):
            if len(c) + len(d) < 2:
                continue
            Dc, Dd = A.dim(c), A.dim(d)
            P = A.product(c, d)
            for i, j in _pairs(A, c):
                lhs = A.contraction(c + d, i, j) @ P
                rhs = A.product(_remove(c, (i, j)), d) @ A.contraction(c, i, j).kron(I(Dd))
                t.record("c3_left", lhs == rhs,
                         lambda: {"c": list(c), "d": list(d), "i": i, "j": j})
            nc = len(c)
            for i, j in _pairs(A, d):
                lhs = A.contraction(c + d, nc + i, nc + j) @ P
                rhs = A.product(c, _remove(d, (i, j))) @ I(Dc).kron(A.contraction(d, i, j))
                t.record("c3_right", lhs == rhs,
                         lambda: {"c": list(c), "d": list(d), "i": i, "j": j})

    # (e1)
    if g >= 3:
        for w in words(pal, g - 2, 1):
            Dw = A.dim(w)
            for j, c in enumerate(w):
                oc = pal.w(c)
                move = Permutation((j,) + tuple(range(j)) + tuple(range(j + 1, len(w))))
                head = (c, oc)
                lhs = A.contraction(head + w, 1, 2 + j) @ A.product(head, w) @ A.epsilon(c).kron(I(Dw))
                lhs = A.action((c,) + _remove(w, (j,)), move) @ lhs
                t.record("e1_first", lhs == I(Dw), lambda: {"word": list(w), "j": j})
                head = (oc, c)
                lhs = A.contraction(head + w, 0, 2 + j) @ A.product(head, w) @ A.epsilon(oc).kron(I(Dw))
                lhs = A.action((c,) + _remove(w, (j,)), move) @ lhs
                t.record("e1_second", lhs == I(Dw), lambda: {"word": list(w), "j": j})

    return t.report(suite="ca-axioms", max_grade=g)


# --------------------------------------------------------------------------
# modular operads


class ModularOperad:
    """Multiplication ``diamond[i, j] = zeta[i, |c| + j] o product`` with the
    contractions and units of the underlying circuit algebra."""

    def __init__(self, A: CircuitAlgebraOracle):
        self.A = A
        self.palette = A.palette

    def diamond(self, c: Word, d: Word, i: int, j: int) -> ExactMatrix:
        return self.A.contraction(c + d, i, len(c) + j) @ self.A.product(c, d)

    def contraction(self, w: Word, i: int, j: int) -> ExactMatrix:
        return self.A.contraction(w, i, j)

    def epsilon(self, c: str) -> ExactMatrix:
        return self.A.epsilon(c)


def derive_modular_operad(A: CircuitAlgebraOracle) -> ModularOperad:
    return ModularOperad(A)


def check_modular_operad(M: ModularOperad, max_grade: Optional[int] = None) -> dict:
    """Exhaustive check of (m1)-(m4), the unit law and commutativity."""
    A = M.A
    g = A.max_grade if max_grade is None else max_grade
    pal = A.palette
    om = pal.w
    t = _Tally()
    I = ExactMatrix.identity

    def legs(word, colour):
        return [k for k, x in enumerate(word) if x == colour]

    # (m1)
    for b in words(pal, g, 1):
        for c in words(pal, g - len(b), 2):
            for d in words(pal, g - len(b) - len(c), 1):
                n1 = len(b)
                Db, Dc, Dd = A.dim(b), A.dim(c), A.dim(d)
                for i in range(n1):
                    for j in legs(c, om(b[i])):
                        for k in range(len(c)):
                            if k == j:
                                continue
                            for m in legs(d, om(c[k])):
                                bc = _remove(b, (i,)) + _remove(c, (j,))
                                k2 = n1 - 1 + k - (j < k)
                                lhs = M.diamond(bc, d, k2, m) @ M.diamond(b, c, i, j).kron(I(Dd))
                                cd = _remove(c, (k,)) + _remove(d, (m,))
                                j2 = j - (k < j)
                                rhs = M.diamond(b, cd, i, j2) @ I(Db).kron(M.diamond(c, d, k, m))
                                t.record("m1", lhs == rhs, lambda: {
                                    "b": list(b), "c": list(c), "d": list(d), "i": i, "j": j, "k": k, "m": m})

    # (m2) is (c2) for the same contractions
    for w in words(pal, g, 4):
        ps = _pairs(A, w)
        for i, j in ps:
            for k, m in ps:
                if len({i, j, k, m}) < 4 or (i, j) >= (k, m):
                    continue
                lhs = M.contraction(_remove(w, (k, m)), _shift(i, (k, m)), _shift(j, (k, m))) @ M.contraction(w, k, m)
                rhs = M.contraction(_remove(w, (i, j)), _shift(k, (i, j)), _shift(m, (i, j))) @ M.contraction(w, i, j)
                t.record("m2", lhs == rhs, lambda: {"word": list(w), "pair1": [i, j], "pair2": [k, m]})

    for c in words(pal, g, 1):
        for d in words(pal, g - len(c), 1):
            n1 = len(c)
            Dd = A.dim(d)
            # (m3)
            for i, j in _pairs(A, c):
                for k in range(n1):
                    if k in (i, j):
                        continue
                    for m in legs(d, om(c[k])):
                        k2 = k - (i < k) - (j < k)
                        lhs = M.diamond(_remove(c, (i, j)), d, k2, m) @ M.contraction(c, i, j).kron(I(Dd))
                        i2, j2 = i - (k < i), j - (k < j)
                        rhs = M.contraction(_remove(c, (k,)) + _remove(d, (m,)), i2, j2) @ M.diamond(c, d, k, m)
                        t.record("m3", lhs == rhs, lambda: {
                            "c": list(c), "d": list(d), "i": i, "j": j, "k": k, "m": m})
            # (m4)
            for i in range(n1):
                for j in range(n1):
                    if i == j:
                        continue
                    for k in legs(d, om(c[i])):
                        for m in legs(d, om(c[j])):
                            if k == m or (i, k) > (j, m):
                                continue
                            j2 = j - (i < j)
                            m2 = n1 - 1 + m - (k < m)
                            lhs = M.contraction(_remove(c, (i,)) + _remove(d, (k,)), j2, m2) @ M.diamond(c, d, i, k)
                            i2 = i - (j < i)
                            k2 = n1 - 1 + k - (m < k)
                            rhs = M.contraction(_remove(c, (j,)) + _remove(d, (m,)), i2, k2) @ M.diamond(c, d, j, m)
                            t.record("m4", lhs == rhs, lambda: {
                                "c": list(c), "d": list(d), "i": i, "j": j, "k": k, "m": m})
            # commutativity
            for i in range(n1):
                for j in legs(d, om(c[i])):
                    lhs = M.diamond(c, d, i, j)
                    rest_c, rest_d = _remove(c, (i,)), _remove(d, (j,))
                    a, b = len(rest_c), len(rest_d)
                    back = Permutation(tuple(a + x for x in range(b)) + tuple(range(a)))
                    rhs = A.action(rest_d + rest_c, back) @ M.diamond(d, c, j, i) @ A.factor_swap(c, d)
                    t.record("commutative", lhs == rhs, lambda: {"c": list(c), "d": list(d), "i": i, "j": j})

    # unit law
    if g >= 3:
        for w in words(pal, g - 2, 1):
            Dw = A.dim(w)
            for j, c in enumerate(w):
                move = Permutation((j,) + tuple(range(j)) + tuple(range(j + 1, len(w))))
                lhs = M.diamond((c, om(c)), w, 1, j) @ M.epsilon(c).kron(I(Dw))
                lhs = A.action((c,) + _remove(w, (j,)), move) @ lhs
                t.record("unit", lhs == I(Dw), lambda: {"word": list(w), "j": j})

    return t.report(suite="modular-operad", max_grade=g)


# --------------------------------------------------------------------------
# wheeled props


class WheeledPropView:
    """Interface for a wheeled prop with exact hom-spaces ``P(m, n)``.

    Elements are columns. ``vertical(l, m, n)`` maps ``P(l, m) (x) P(m, n)``
    to ``P(l, n)`` (second after first); ``horizontal`` is the monoidal
    product; ``trace(m, n, k)`` traces the last ``k`` inputs against the last
    ``k`` outputs of ``P(m + k, n + k)``.
    """

    def dim(self, m: int, n: int) -> int:
        raise NotImplementedError

    def vertical(self, l: int, m: int, n: int) -> ExactMatrix:
        raise NotImplementedError

    def horizontal(self, m1: int, n1: int, m2: int, n2: int) -> ExactMatrix:
        raise NotImplementedError

    def trace(self, m: int, n: int, k: int) -> ExactMatrix:
        raise NotImplementedError

    def identity(self, m: int) -> ExactMatrix:
        raise NotImplementedError

    def permutation(self, p: Permutation) -> ExactMatrix:
        """Element of ``P(k, k)`` sending input strand ``i`` to output ``p(i)``."""
        raise NotImplementedError

    # derived

    def post(self, l: int, m: int, n: int, y: ExactMatrix) -> ExactMatrix:
        """``x -> y o x`` on ``P(l, m)`` for fixed ``y`` in ``P(m, n)``."""
        return self.vertical(l, m, n) @ ExactMatrix.identity(self.dim(l, m)).kron(y)

    def pre(self, x: ExactMatrix, l: int, m: int, n: int) -> ExactMatrix:
        """``y -> y o x`` on ``P(m, n)`` for fixed ``x`` in ``P(l, m)``."""
        return self.vertical(l, m, n) @ x.kron(ExactMatrix.identity(self.dim(m, n)))

    def symmetry(self, a: int, b: int) -> ExactMatrix:
        return self.permutation(Permutation(tuple(b + i for i in range(a)) + tuple(range(b))))


def _digits(x: int, d: int, n: int) -> Tuple[int, ...]:
    out = []
    for _ in range(n):
        x, r = divmod(x, d)
        out.append(r)
    return tuple(reversed(out))


def _num(digits: Sequence[int], d: int) -> int:
    x = 0
    for v in digits:
        x = x * d + v
    return x


class MatrixWheeledProp(WheeledPropView):
    """``Hom(V^m, V^n)`` with matrix product, Kronecker product and partial trace.

    A matrix ``M`` is stored as the column with entry ``M[J, K]`` at
    ``J * d^m + rev(K)``, where ``rev`` reads the input multi-index
    backwards. This matches bending inputs down with nested cups.
    """

    def __init__(self, d: int):
        self.d = d

    def dim(self, m, n):
        return self.d ** (m + n)

    def pack(self, J: Sequence[int], K: Sequence[int]) -> int:
        return _num(J, self.d) * self.d ** len(K) + _num(tuple(reversed(K)), self.d)

    def from_matrix(self, M: ExactMatrix, m: int, n: int) -> ExactMatrix:
        d = self.d
        v = ExactMatrix(d ** (m + n), 1)
        for r, row in M.data.items():
            J = _digits(r, d, n)
            for c, x in row.items():
                v.data[self.pack(J, _digits(c, d, m))] = {0: x}
        return v

    def to_matrix(self, v: ExactMatrix, m: int, n: int) -> ExactMatrix:
        d = self.d
        M = ExactMatrix(d ** n, d ** m)
        for idx, row in v.data.items():
            x = row.get(0)
            if x:
                J = _digits(idx // d ** m, d, n)
                K = tuple(reversed(_digits(idx % d ** m, d, m)))
                M.data.setdefault(_num(J, d), {})[_num(K, d)] = x
        return M

    @lru_cache(maxsize=None)
    def vertical(self, l, m, n):
        d = self.d
        V = ExactMatrix(self.dim(l, n), self.dim(l, m) * self.dim(m, n))
        dy = self.dim(m, n)
        for J in product(range(d), repeat=n):
            for K in product(range(d), repeat=l):
                row = V.data.setdefault(self.pack(J, K), {})
                for L in product(range(d), repeat=m):
                    row[self.pack(L, K) * dy + self.pack(J, L)] = Fraction(1)
        return V

    @lru_cache(maxsize=None)
    def horizontal(self, m1, n1, m2, n2):
        d = self.d
        dy = self.dim(m2, n2)
        H = ExactMatrix(self.dim(m1 + m2, n1 + n2), self.dim(m1, n1) * dy)
        for J1, K1, J2, K2 in product(*(product(range(d), repeat=r) for r in (n1, m1, n2, m2))):
            H.data[self.pack(J1 + J2, K1 + K2)] = {self.pack(J1, K1) * dy + self.pack(J2, K2): Fraction(1)}
        return H

    @lru_cache(maxsize=None)
    def trace(self, m, n, k):
        d = self.d
        T = ExactMatrix(self.dim(m, n), self.dim(m + k, n + k))
        for J in product(range(d), repeat=n):
            for K in product(range(d), repeat=m):
                T.data[self.pack(J, K)] = {
                    self.pack(J + U, K + U): Fraction(1) for U in product(range(d), repeat=k)
                }
        return T

    def identity(self, m):
        return self.permutation(Permutation.identity(m))

    def permutation(self, p):
        d, k = self.d, p.n
        v = ExactMatrix(d ** (2 * k), 1)
        for K in product(range(d), repeat=k):
            J = [0] * k
            for i, x in enumerate(K):
                J[p(i)] = x
            v.data[self.pack(J, K)] = {0: Fraction(1)}
        return v


def _prop_word(m: int, n: int) -> Word:
    return ("+",) * n + ("-",) * m


def _require_oriented(palette: Palette):
    if set(palette.colours) != {"+", "-"} or palette.w("+") != "-":
        raise ColourError("wheeled props need the oriented palette {+, -}")


class CAWheeledProp(WheeledPropView):
    """The wheeled prop of an oriented circuit algebra.

    ``P(m, n) = A(+^n -^m)``: outputs are the ``+`` legs in order, input
    strand ``k`` is the ``-`` leg at position ``n + m - 1 - k``.
    """

    def __init__(self, A: CircuitAlgebraOracle):
        _require_oriented(A.palette)
        self.A = A
        self._cache: Dict[tuple, ExactMatrix] = {}

    def _memo(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    def dim(self, m, n):
        return self.A.dim(_prop_word(m, n))

    def vertical(self, l, m, n):
        def build():
            A = self.A
            wx, wy = _prop_word(l, m), _prop_word(m, n)
            w = wx + wy
            base = m + l + n
            Z, rest = A.contract_pairs(w, [(k, base + m - 1 - k) for k in range(m)])
            # rest is -^l +^n; move the outputs in front
            back = Permutation(tuple(n + i for i in range(l)) + tuple(range(n)))
            return A.action(rest, back) @ Z @ A.product(wx, wy)

        return self._memo(("v", l, m, n), build)

    def horizontal(self, m1, n1, m2, n2):
        def build():
            A = self.A
            wx, wy = _prop_word(m1, n1), _prop_word(m2, n2)
            # [x+][x-][y+][y-] -> [x+][y+][y-][x-]
            img = (list(range(n1))
                   + [n1 + n2 + m2 + i for i in range(m1)]
                   + [n1 + i for i in range(n2)]
                   + [n1 + n2 + i for i in range(m2)])
            return A.action(wx + wy, Permutation(tuple(img))) @ A.product(wx, wy)

        return self._memo(("h", m1, n1, m2, n2), build)

    def trace(self, m, n, k):
        def build():
            Z, _ = self.A.contract_pairs(_prop_word(m + k, n + k), [(n + i, n + 2 * k - 1 - i) for i in range(k)])
            return Z

        return self._memo(("t", m, n, k), build)

    def identity(self, m):
        def build():
            if m == 0:
                return self.A.unit()
            one = self.A.epsilon("+")
            return self.horizontal(m - 1, m - 1, 1, 1) @ self.identity(m - 1).kron(one)

        return self._memo(("id", m), build)

    def permutation(self, p):
        k = p.n
        full = Permutation(tuple(p.images) + tuple(range(k, 2 * k)))
        return self.A.action(_prop_word(k, k), full) @ self.identity(k)


def ca_to_wheeled_prop(A: CircuitAlgebraOracle) -> CAWheeledProp:
    return CAWheeledProp(A)


class PropCA(CircuitAlgebraOracle):
    """The oriented circuit algebra of a wheeled prop: ``A(w) = P(#-, #+)``.

    Legs of ``w`` are identified with strands through the walled normal
    form: the ``+`` legs in order are the outputs and the ``t``-th ``-`` leg
    is input strand ``#- - 1 - t``.
    """

    def __init__(self, P: WheeledPropView, max_grade: int = 4):
        self.P = P
        self.palette = oriented_palette()
        self.max_grade = max_grade

    @staticmethod
    def _shape(w: Word) -> Tuple[int, int]:
        ups = sum(1 for c in w if is_up(c))
        return len(w) - ups, ups

    def dim(self, w):
        return self.P.dim(*self._shape(w))

    def unit(self):
        return self.P.identity(0)

    def epsilon(self, c):
        if c not in ("+", "-"):
            raise ColourError(f"unknown colour {c!r}")
        return self.P.identity(1)

    def product(self, w1, w2):
        P = self.P
        b1, a1 = self._shape(w1)
        b2, a2 = self._shape(w2)
        H = P.horizontal(b2, a2, b1, a1) @ _swap_factors(P.dim(b1, a1), P.dim(b2, a2))
        return P.post(b2 + b1, a2 + a1, a1 + a2, P.symmetry(a2, a1)) @ H

    def contraction(self, w, i, j):
        w = tuple(w)
        self._check_pair(w, i, j)
        P = self.P
        b, a = self._shape(w)
        if not is_up(w[i]):
            i, j = j, i
        u = sum(1 for c in w[:i] if is_up(c))
        t_ = sum(1 for c in w[:j] if not is_up(c))
        s = b - 1 - t_
        out = Permutation(tuple(range(u)) + (a - 1,) + tuple(range(u, a - 1)))
        inp = Permutation(tuple(range(s)) + tuple(range(s + 1, b)) + (s,))
        # z -> out o z o inp puts both strands last
        M = P.post(b, a, a, P.permutation(out))
        M = P.pre(P.permutation(inp), b, b, a) @ M
        return P.trace(b - 1, a - 1, 1) @ M

    def transposition(self, w, k):
        w = tuple(w)
        P = self.P
        b, a = self._shape(w)
        x, y = w[k], w[k + 1]
        if is_up(x) != is_up(y):
            return ExactMatrix.identity(self.dim(w))
        if is_up(x):
            u = sum(1 for c in w[:k] if is_up(c))
            return P.post(b, a, a, P.permutation(Permutation.transposition(a, u, u + 1)))
        t_ = sum(1 for c in w[:k] if not is_up(c))
        s = b - 2 - t_
        return P.pre(P.permutation(Permutation.transposition(b, s, s + 1)), b, b, a)


def wheeled_prop_to_ca(P: WheeledPropView, max_grade: int = 4) -> PropCA:
    return PropCA(P, max_grade)


def check_wheeled_prop(P: WheeledPropView, max_legs: int = 3) -> dict:
    """Category laws, interchange and the trace axioms on all small shapes.

    Every operand has at most ``max_legs`` boundary strands; checks are
    matrix identities, so they hold on every basis element.
    """
    t = _Tally()
    I = ExactMatrix.identity
    shapes = [(m, n) for m in range(max_legs + 1) for n in range(max_legs + 1 - m)]

    for l, m in shapes:
        for n in range(max_legs + 1 - m):
            V = P.vertical(l, m, n)
            Dx, Dy = P.dim(l, m), P.dim(m, n)
            if n == m:
                t.record("right_unit", P.post(l, m, m, P.identity(m)) == I(Dx), lambda: {"l": l, "m": m})
            if l == m:
                t.record("left_unit", P.pre(P.identity(m), m, m, n) == I(Dy), lambda: {"m": m, "n": n})
            for o in range(max_legs + 1 - n):
                if l + m + n + o > max_legs + 2:
                    continue
                lhs = P.vertical(l, n, o) @ V.kron(I(P.dim(n, o)))
                rhs = P.vertical(l, m, o) @ I(Dx).kron(P.vertical(m, n, o))
                t.record("associativity", lhs == rhs, lambda: {"l": l, "m": m, "n": n, "o": o})

    for (m1, n1), (m2, n2) in product(shapes, repeat=2):
        for n1b in range(max_legs + 1 - n1):
            for n2b in range(max_legs + 1 - n2):
                if m1 + n1 + n1b + m2 + n2 + n2b > max_legs + 3:
                    continue
                # (x2 o x1) (x) (y2 o y1) = (x2 (x) y2) o (x1 (x) y1)
                d1, d2 = P.dim(m1, n1), P.dim(n1, n1b)
                e1, e2 = P.dim(m2, n2), P.dim(n2, n2b)
                lhs = P.horizontal(m1, n1b, m2, n2b) @ P.vertical(m1, n1, n1b).kron(P.vertical(m2, n2, n2b))
                rhs = P.vertical(m1 + m2, n1 + n2, n1b + n2b) @ P.horizontal(m1, n1, m2, n2).kron(
                    P.horizontal(n1, n1b, n2, n2b))
                rhs = rhs @ _regroup(d1, d2, e1, e2)
                t.record("interchange", lhs == rhs, lambda: {"x1": [m1, n1], "x2": [n1, n1b],
                                                             "y1": [m2, n2], "y2": [n2, n2b]})

    for m, n in shapes:
        t.record("vanishing_unit", P.trace(m, n, 0) == I(P.dim(m, n)), lambda: {"m": m, "n": n})
        for k1 in range(1, 3):
            for k2 in range(1, 3):
                if m + n + 2 * (k1 + k2) > 2 * max_legs:
                    continue
                lhs = P.trace(m, n, k1 + k2)
                rhs = P.trace(m, n, k1) @ P.trace(m + k1, n + k1, k2)
                t.record("vanishing_tensor", lhs == rhs, lambda: {"m": m, "n": n, "k1": k1, "k2": k2})
        for m1, n1 in shapes:
            for k in range(1, 3):
                if m1 + n1 + m + n + 2 * k > max_legs + 3:
                    continue
                Dg = P.dim(m1, n1)
                lhs = P.trace(m1 + m, n1 + n, k) @ P.horizontal(m1, n1, m + k, n + k)
                rhs = P.horizontal(m1, n1, m, n) @ I(Dg).kron(P.trace(m, n, k))
                t.record("superposing", lhs == rhs, lambda: {"g": [m1, n1], "f": [m + k, n + k], "k": k})

    for a in range(1, 3):
        lhs = P.trace(a, a, a) @ P.symmetry(a, a)
        t.record("yanking", lhs == P.identity(a), lambda: {"a": a})

    return t.report(suite="wheeled-prop", max_legs=max_legs)


def _regroup(d1, d2, e1, e2) -> ExactMatrix:
    """``x1 x2 y1 y2 -> x1 y1 x2 y2``."""
    M = ExactMatrix(d1 * e1 * d2 * e2, d1 * d2 * e1 * e2)
    for a, b, c, e in product(range(d1), range(d2), range(e1), range(e2)):
        src = ((a * d2 + b) * e1 + c) * e2 + e
        dst = ((a * e1 + c) * d2 + b) * e2 + e
        M.data[dst] = {src: Fraction(1)}
    return M


def compare_props(P: WheeledPropView, Q: WheeledPropView, max_legs: int = 3) -> dict:
    """Do two wheeled props have identical structure matrices on small shapes?"""
    t = _Tally()
    shapes = [(m, n) for m in range(max_legs + 1) for n in range(max_legs + 1 - m)]
    for m, n in shapes:
        t.record("dim", P.dim(m, n) == Q.dim(m, n), lambda: {"m": m, "n": n})
        for o in range(max_legs + 1 - n):
            t.record("vertical", P.vertical(m, n, o) == Q.vertical(m, n, o), lambda: {"l": m, "m": n, "n": o})
        for k in range(1, 3):
            if m + n + 2 * k <= 2 * max_legs:
                t.record("trace", P.trace(m, n, k) == Q.trace(m, n, k), lambda: {"m": m, "n": n, "k": k})
    for (m1, n1), (m2, n2) in product(shapes, repeat=2):
        if m1 + n1 + m2 + n2 <= max_legs + 1:
            t.record("horizontal", P.horizontal(m1, n1, m2, n2) == Q.horizontal(m1, n1, m2, n2),
                     lambda: {"x": [m1, n1], "y": [m2, n2]})
    for k in range(max_legs + 1):
        t.record("identity", P.identity(k) == Q.identity(k), lambda: {"k": k})
        for p in permutations(range(k)):
            t.record("permutation", P.permutation(Permutation(p)) == Q.permutation(Permutation(p)),
                     lambda: {"p": list(p)})
    return t.report(suite="compare-props", max_legs=max_legs)


def round_trip_check(A: CircuitAlgebraOracle, max_grade: Optional[int] = None,
                     max_legs: int = 3) -> dict:
    """CA -> wheeled prop -> CA, compared through the walled shuffles, and
    prop -> CA -> prop compared directly."""
    g = A.max_grade if max_grade is None else max_grade
    P = ca_to_wheeled_prop(A)
    B = wheeled_prop_to_ca(P, g)
    t = _Tally()
    pal = A.palette
    I = ExactMatrix.identity

    def phi(w):
        return A.action(w, walled_normal_form(w)[1])

    for w in words(pal, g):
        t.record("dim", A.dim(w) == B.dim(w), lambda: {"word": list(w)})
        for i, j in _pairs(A, w):
            lhs = B.contraction(w, i, j) @ phi(w)
            rhs = phi(_remove(w, (i, j))) @ A.contraction(w, i, j)
            t.record("contraction", lhs == rhs, lambda: {"word": list(w), "i": i, "j": j})
        for k in range(len(w) - 1):
            w2 = w[:k] + (w[k + 1], w[k]) + w[k + 2:]
            lhs = B.transposition(w, k) @ phi(w)
            rhs = phi(w2) @ A.transposition(w, k)
            t.record("transposition", lhs == rhs, lambda: {"word": list(w), "k": k})
        for v in words(pal, g - len(w)):
            lhs = B.product(w, v) @ phi(w).kron(phi(v))
            rhs = phi(w + v) @ A.product(w, v)
            t.record("product", lhs == rhs, lambda: {"a": list(w), "b": list(v)})
    t.record("unit", B.unit() == A.unit(), lambda: {})
    for c in pal.colours:
        t.record("epsilon", B.epsilon(c) == phi((c, pal.w(c))) @ A.epsilon(c), lambda: {"colour": c})

    back = compare_props(P, ca_to_wheeled_prop(B), max_legs)
    for name, entry in back["checks"].items():
        t.checks["prop_" + name] = entry
    return t.report(suite="round-trip", max_grade=g)
