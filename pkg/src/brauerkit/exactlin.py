"""Exact scalars, formal linear combinations and rational linear algebra.

Everything here is exact: rationals are :class:`fractions.Fraction`, the
generic bubble parameter lives in :class:`Poly` (polynomials in ``t`` with
rational coefficients), and elimination is plain Gauss-Jordan over the
rationals on sparse rows.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Dict, Hashable, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

__all__ = [
    "Poly",
    "T",
    "Scalar",
    "as_scalar",
    "LinComb",
    "ExactMatrix",
    "EchelonBasis",
    "rank",
    "nullspace",
    "solve",
    "span_closure",
    "specialize",
    "format_scalar",
]


class Poly:
    """Univariate polynomial in ``t`` over the rationals.

    Coefficients are stored lowest degree first with trailing zeros stripped,
    so equal polynomials have equal representations.

    >>> p = (T - 1) * (T + 1)
    >>> p
    Poly(t^2 - 1)
    >>> p(3)
    Fraction(8, 1)
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: Tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def monomial(cls, k: int, c=1) -> "Poly":
        return cls([0] * k + [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def constant(self) -> Fraction:
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def __call__(self, x) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def _coerce(self, other) -> Optional["Poly"]:
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction, Rational)):
            return Poly([other])
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = o.coeffs + (Fraction(0),) * (n - len(o.coeffs))
        return Poly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not self.coeffs or not o.coeffs:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly([1])
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        if len(self.coeffs) <= 1:
            return hash(self.constant())
        return hash(("Poly", self.coeffs))

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return f"Poly({format_poly(self)})"


T = Poly([0, 1])

Scalar = Union[Fraction, Poly]


def as_scalar(x) -> Scalar:
    """Normalise ``x`` to a Fraction, or to a Poly when it really depends on t."""
    if isinstance(x, Poly):
        return x.constant() if x.is_constant() else x
    return Fraction(x)


def _fmt_rat(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_poly(p: Poly) -> str:
    if not p.coeffs:
        return "0"
    parts = []
    for k in range(len(p.coeffs) - 1, -1, -1):
        c = p.coeffs[k]
        if c == 0:
            continue
        mag = abs(c)
        if k == 0:
            body = _fmt_rat(mag)
        else:
            var = "t" if k == 1 else f"t^{k}"
            body = var if mag == 1 else _fmt_rat(mag) + var
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts)


def format_scalar(x) -> str:
    """Canonical text of a scalar, as used by the expression printer."""
    x = as_scalar(x)
    if isinstance(x, Poly):
        return f"({format_poly(x)})"
    if x < 0:
        return f"({_fmt_rat(x)})"
    return _fmt_rat(x)


def _is_zero(x) -> bool:
    return not x


class LinComb:
    """Finitely supported formal linear combination over hashable basis keys.

    Zero coefficients are never stored, so ``==`` is equality of the
    underlying maps.

    >>> a = LinComb({"x": 1, "y": 2})
    >>> a + LinComb({"y": -2})
    LinComb({'x': 1})
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Mapping[Hashable, object]] = None):
        d: Dict[Hashable, Scalar] = {}
        if terms:
            for k, v in terms.items():
                v = as_scalar(v)
                if not _is_zero(v):
                    d[k] = v
        self.terms = d

    @classmethod
    def basis(cls, key, coeff=1) -> "LinComb":
        return cls({key: coeff})

    def __iter__(self) -> Iterator[Tuple[Hashable, Scalar]]:
        return iter(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __getitem__(self, key):
        return self.terms.get(key, Fraction(0))

    def keys(self):
        return self.terms.keys()

    def __add__(self, other: "LinComb") -> "LinComb":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return LinComb(out)

    def __neg__(self):
        return LinComb({k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "LinComb") -> "LinComb":
        return self + (-other)

    def scale(self, c) -> "LinComb":
        c = as_scalar(c)
        if _is_zero(c):
            return LinComb()
        return LinComb({k: c * v for k, v in self.terms.items()})

    def __rmul__(self, c):
        if isinstance(c, (int, Fraction, Poly)):
            return self.scale(c)
        return NotImplemented

    def map_coeffs(self, fn) -> "LinComb":
        return LinComb({k: fn(v) for k, v in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, LinComb):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        inner = ", ".join(f"{k!r}: {_fmt_scalar_repr(v)}" for k, v in self.terms.items())
        return f"LinComb({{{inner}}})"


def _fmt_scalar_repr(v):
    if isinstance(v, Fraction):
        return _fmt_rat(v)
    return repr(v)


def specialize(x: LinComb, delta) -> LinComb:
    """Evaluate polynomial coefficients at ``t = delta``.

    >>> specialize(LinComb({"b": T}), 3)
    LinComb({'b': 3})
    """
    delta = Fraction(delta)
    return LinComb({k: (v(delta) if isinstance(v, Poly) else v) for k, v in x})


# --------------------------------------------------------------------------
# sparse rows and elimination

Row = Dict[int, Fraction]


def _lead(row: Row) -> int:
    return min(row)


class EchelonBasis:
    """Reduced row-echelon basis of a subspace of ``Q^dim``.

    Rows are sparse dicts ``{column: value}``, each normalised to have leading
    coefficient 1 and with pivot columns cleared from every other row, so two
    bases of the same subspace are identical.
    """

    def __init__(self, dim: int):
        self.dim = dim
        self.rows: Dict[int, Row] = {}

    def copy(self) -> "EchelonBasis":
        out = EchelonBasis(self.dim)
        out.rows = {p: dict(r) for p, r in self.rows.items()}
        return out

    def __len__(self):
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, vec: Mapping[int, object]) -> Row:
        """Remainder of ``vec`` after elimination against the basis."""
        v: Row = {c: Fraction(x) for c, x in vec.items() if x}
        if not self.rows:
            return v
        # pivots are processed in increasing order; reductions may create new
        # entries only at non-pivot columns because rows are fully reduced
        for p in sorted(c for c in list(v) if c in self.rows):
            a = v.get(p)
            if not a:
                continue
            for c, x in self.rows[p].items():
                nv = v.get(c, 0) - a * x
                if nv:
                    v[c] = nv
                else:
                    v.pop(c, None)
        return v

    def contains(self, vec: Mapping[int, object]) -> bool:
        return not self.reduce(vec)

    def add(self, vec: Mapping[int, object]) -> bool:
        """Insert ``vec``; return True when the span grew."""
        r = self.reduce(vec)
        if not r:
            return False
        p = _lead(r)
        inv = 1 / r[p]
        r = {c: x * inv for c, x in r.items()}
        for q, row in self.rows.items():
            a = row.get(p)
            if a:
                for c, x in r.items():
                    nv = row.get(c, 0) - a * x
                    if nv:
                        row[c] = nv
                    else:
                        row.pop(c, None)
        self.rows[p] = r
        return True

    def pivots(self) -> List[int]:
        return sorted(self.rows)

    def basis_rows(self) -> List[Row]:
        return [self.rows[p] for p in sorted(self.rows)]

    def dense_rows(self) -> List[List[Fraction]]:
        out = []
        for r in self.basis_rows():
            v = [Fraction(0)] * self.dim
            for c, x in r.items():
                v[c] = x
            out.append(v)
        return out

    def key(self) -> Tuple:
        """Canonical hashable form; equal iff the subspaces are equal."""
        return tuple(tuple(sorted(self.rows[p].items())) for p in sorted(self.rows))

    def __eq__(self, other):
        if not isinstance(other, EchelonBasis):
            return NotImplemented
        return self.dim == other.dim and self.key() == other.key()

    def issubspace(self, other: "EchelonBasis") -> bool:
        return all(other.contains(r) for r in self.rows.values())

    def __repr__(self):
        return f"EchelonBasis(dim={self.dim}, rank={self.rank})"


def _as_row(v) -> Row:
    if isinstance(v, Mapping):
        return {int(c): Fraction(x) for c, x in v.items() if x}
    return {i: Fraction(x) for i, x in enumerate(v) if x}


def span_closure(basis: EchelonBasis, new_vectors: Iterable) -> Tuple[EchelonBasis, bool]:
    """Return the echelon basis of ``span(basis) + span(new_vectors)`` and
    whether it is strictly larger. The input basis is left untouched."""
    out = basis.copy()
    grew = False
    for v in new_vectors:
        grew |= out.add(_as_row(v))
    return out, grew


class ExactMatrix:
    """Rational matrix with sparse row storage.

    ``data[r]`` maps column index to a nonzero Fraction. Shapes are explicit,
    so all-zero rows and columns are represented faithfully.
    """

    __slots__ = ("nrows", "ncols", "data")

    def __init__(self, nrows: int, ncols: int, data: Optional[Dict[int, Row]] = None):
        self.nrows = nrows
        self.ncols = ncols
        self.data: Dict[int, Row] = {}
        if data:
            for r, row in data.items():
                clean = {c: Fraction(x) for c, x in row.items() if x}
                if clean:
                    self.data[r] = clean

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "ExactMatrix":
        nr = len(rows)
        nc = len(rows[0]) if nr else 0
        return cls(nr, nc, {i: {j: x for j, x in enumerate(row) if x} for i, row in enumerate(rows)})

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls(n, n, {i: {i: 1} for i in range(n)})

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "ExactMatrix":
        return cls(nrows, ncols)

    @classmethod
    def scalar(cls, x) -> "ExactMatrix":
        return cls(1, 1, {0: {0: x}})

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, rc: Tuple[int, int]) -> Fraction:
        r, c = rc
        return self.data.get(r, {}).get(c, Fraction(0))

    def to_rows(self) -> List[List[Fraction]]:
        out = [[Fraction(0)] * self.ncols for _ in range(self.nrows)]
        for r, row in self.data.items():
            for c, x in row.items():
                out[r][c] = x
        return out

    def nnz(self) -> int:
        return sum(len(r) for r in self.data.values())

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out: Dict[int, Row] = {}
        for r, row in self.data.items():
            acc: Row = {}
            for k, a in row.items():
                orow = other.data.get(k)
                if not orow:
                    continue
                for c, b in orow.items():
                    acc[c] = acc.get(c, 0) + a * b
            acc = {c: x for c, x in acc.items() if x}
            if acc:
                out[r] = acc
        m = ExactMatrix(self.nrows, other.ncols)
        m.data = out
        return m

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        out = {r: dict(row) for r, row in self.data.items()}
        for r, row in other.data.items():
            tgt = out.setdefault(r, {})
            for c, x in row.items():
                tgt[c] = tgt.get(c, 0) + x
        return ExactMatrix(self.nrows, self.ncols, out)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "ExactMatrix":
        c = Fraction(c)
        return ExactMatrix(self.nrows, self.ncols, {r: {k: c * x for k, x in row.items()} for r, row in self.data.items()})

    def kron(self, other: "ExactMatrix") -> "ExactMatrix":
        out: Dict[int, Row] = {}
        for r1, row1 in self.data.items():
            for r2, row2 in other.data.items():
                r = r1 * other.nrows + r2
                out[r] = {c1 * other.ncols + c2: a * b for c1, a in row1.items() for c2, b in row2.items()}
        m = ExactMatrix(self.nrows * other.nrows, self.ncols * other.ncols)
        m.data = out
        return m

    @property
    def T(self) -> "ExactMatrix":
        out: Dict[int, Row] = {}
        for r, row in self.data.items():
            for c, x in row.items():
                out.setdefault(c, {})[r] = x
        m = ExactMatrix(self.ncols, self.nrows)
        m.data = out
        return m

    def columns(self) -> List[Row]:
        cols: List[Row] = [{} for _ in range(self.ncols)]
        for r, row in self.data.items():
            for c, x in row.items():
                cols[c][r] = x
        return cols

    def flatten(self) -> Row:
        """Column-major flattening: entry (r, c) goes to ``c * nrows + r``."""
        return {c * self.nrows + r: x for r, row in self.data.items() for c, x in row.items()}

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and self.data == other.data

    def __hash__(self):
        return hash((self.shape, frozenset((r, frozenset(row.items())) for r, row in self.data.items())))

    def __repr__(self):
        if self.nrows * self.ncols <= 64:
            return f"ExactMatrix({[[_fmt_rat(x) for x in row] for row in self.to_rows()]})"
        return f"ExactMatrix(shape={self.shape}, nnz={self.nnz()})"


def _row_space(M) -> EchelonBasis:
    if isinstance(M, ExactMatrix):
        basis = EchelonBasis(M.ncols)
        for r in sorted(M.data):
            basis.add(M.data[r])
        return basis
    rows = [list(r) for r in M]
    ncols = len(rows[0]) if rows else 0
    basis = EchelonBasis(ncols)
    for r in rows:
        basis.add(_as_row(r))
    return basis


def rank(M) -> int:
    """Rank of an ExactMatrix or a list of rows.

    >>> rank([[1, 2], [2, 4]])
    1
    """
    return _row_space(M).rank


def nullspace(M) -> List[List[Fraction]]:
    """Basis of ``{x : M x = 0}``, one vector per free column.

    >>> nullspace([[1, 1], [1, 1]])
    [[Fraction(-1, 1), Fraction(1, 1)]]
    """
    E = _row_space(M)
    n = E.dim
    piv = E.pivots()
    free = [c for c in range(n) if c not in E.rows]
    out = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for p in piv:
            a = E.rows[p].get(f)
            if a:
                v[p] = -a
        out.append(v)
    return out


def solve(M, b) -> Optional[List[Fraction]]:
    """One solution of ``M x = b`` or None when the system is inconsistent."""
    rows = M.to_rows() if isinstance(M, ExactMatrix) else [list(r) for r in M]
    ncols = len(rows[0]) if rows else 0
    E = EchelonBasis(ncols + 1)
    for r, bi in zip(rows, b):
        E.add(_as_row(list(r) + [bi]))
    if ncols in E.rows:
        return None
    x = [Fraction(0)] * ncols
    for p, row in E.rows.items():
        x[p] = row.get(ncols, Fraction(0))
    return x
