from fractions import Fraction

from hypothesis import given, strategies as st

from brauerkit.exactlin import (
    EchelonBasis,
    ExactMatrix,
    LinComb,
    Poly,
    T,
    format_scalar,
    nullspace,
    rank,
    solve,
    span_closure,
    specialize,
)

rats = st.fractions(min_value=-5, max_value=5, max_denominator=4)
small = st.integers(-3, 3)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


def bareiss_rank(rows):
    # independent oracle: dense cross-multiplying elimination
    a = [list(map(Fraction, r)) for r in rows]
    rk = 0
    ncols = len(a[0]) if a else 0
    for c in range(ncols):
        piv = next((i for i in range(rk, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[rk], a[piv] = a[piv], a[rk]
        for i in range(len(a)):
            if i != rk and a[i][c] != 0:
                f = a[i][c]
                a[i] = [a[rk][c] * x - f * y for x, y in zip(a[i], a[rk])]
        rk += 1
    return rk


def test_examples():
    assert rank(ExactMatrix.identity(3)) == 3
    assert nullspace([[1, 1], [1, 1]]) == [[-1, 1]]
    # orthogonal d=2 values of the cap, twice the cap and the flattened symmetry, by hand
    assert rank([[1, 0, 0, 1], [2, 0, 0, 2], [0, 1, 1, 0]]) == 2
    assert solve([[1, 1], [1, 1]], [1, 2]) is None
    assert solve([[2, 0], [0, 4]], [1, 1]) == [Fraction(1, 2), Fraction(1, 4)]


def test_span_closure_examples():
    b = EchelonBasis(3)
    b, grew = span_closure(b, [[1, 0, 0]])
    assert grew and b.rank == 1
    b2, grew = span_closure(b, [[2, 0, 0]])
    assert not grew and b2.rank == 1
    b3, grew = span_closure(b2, [[0, 0, 1]])
    assert grew and b3.rank == 2
    b4, grew = span_closure(b3, [[0, 0, 1]])
    assert not grew and b4 == b3
    assert b.rank == 1


def test_specialize_examples():
    assert specialize(LinComb({"b": T}), 3) == LinComb({"b": 3})
    assert specialize(LinComb({"b": T - 1}), 1) == LinComb()


def test_poly_canonical_form():
    assert Poly([1, 2, 0, 0]) == Poly([1, 2])
    assert (T - 1) * (T + 1) == T * T - 1
    assert format_scalar(T * T - 2 * T + Fraction(1, 2)) == "(t^2 - 2t + 1/2)"
    assert format_scalar(Fraction(-3, 6)) == "(-1/2)"
    assert format_scalar(Poly([4])) == "4"


def test_lincomb_drops_zeros():
    a = LinComb({"x": 1, "y": 0})
    assert list(a.keys()) == ["x"]
    assert a - a == LinComb()
    assert 0 * a == LinComb()


@given(matrices())
def test_rank_matches_oracle(rows):
    assert rank(rows) == bareiss_rank(rows)


@given(matrices())
def test_rank_nullity(rows):
    ns = nullspace(rows)
    assert rank(rows) + len(ns) == len(rows[0])
    for v in ns:
        assert all(sum(Fraction(a) * b for a, b in zip(r, v)) == 0 for r in rows)


@given(matrices())
def test_rank_invariant_under_transpose_and_row_permutation(rows):
    M = ExactMatrix.from_rows(rows)
    assert rank(M) == rank(M.T) == rank(list(reversed(rows)))


@given(matrices(), st.data())
def test_solve_finds_solutions(rows, data):
    x = data.draw(st.lists(small, min_size=len(rows[0]), max_size=len(rows[0])))
    b = [sum(a * y for a, y in zip(r, x)) for r in rows]
    sol = solve(rows, b)
    assert sol is not None
    assert [sum(Fraction(a) * y for a, y in zip(r, sol)) for r in rows] == b


@given(matrices(3, 3), matrices(3, 3))
def test_matmul_and_kron(a, b):
    A, B = ExactMatrix.from_rows(a), ExactMatrix.from_rows(b)
    if A.ncols == B.nrows:
        dense = [[sum(Fraction(x) * B[k, j] for k, x in enumerate(row)) for j in range(B.ncols)] for row in a]
        assert (A @ B).to_rows() == dense
    K = A.kron(B)
    assert K.shape == (A.nrows * B.nrows, A.ncols * B.ncols)
    for i in range(K.nrows):
        for j in range(K.ncols):
            assert K[i, j] == A[i // B.nrows, j // B.ncols] * B[i % B.nrows, j % B.ncols]


@given(st.lists(rats, max_size=4), st.lists(rats, max_size=4), rats)
def test_specialize_is_a_ring_homomorphism(p, q, x):
    P, Q = Poly(p), Poly(q)
    assert (P * Q)(x) == P(x) * Q(x)
    assert (P + Q)(x) == P(x) + Q(x)
    a = LinComb({"u": P, "v": Q})
    assert specialize(a + a.scale(Q), x) == specialize(a, x) + specialize(a, x).scale(Q(x))


@given(st.dictionaries(st.sampled_from("abcd"), rats), st.dictionaries(st.sampled_from("abcd"), rats), rats, rats)
def test_lincomb_is_a_module(u, v, r, s):
    U, V = LinComb(u), LinComb(v)
    assert U + V == V + U
    assert (U + V).scale(r) == U.scale(r) + V.scale(r)
    assert U.scale(r + s) == U.scale(r) + U.scale(s)
    assert U.scale(r).scale(s) == U.scale(r * s)
