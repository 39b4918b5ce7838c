from itertools import combinations, permutations
from math import comb

import pytest

from brauerkit.diagram import cap, cup, identity, oplus, sym
from brauerkit.exactlin import ExactMatrix
from brauerkit.linear import antisymmetrizer
from brauerkit.tensor import (
    BudgetError,
    EvalFunctor,
    ca_ideal_kernel_check,
    fft_check,
    gl_check,
    invariant_dimension,
    sft_check,
    specialization_check,
    symplectic_check,
)


def catalan(k):
    return comb(2 * k, k) // (k + 1)


def avoiders(n, d):
    # permutations of n with no decreasing subsequence longer than d
    def ok(p):
        return not any(all(p[a] > p[b] for a, b in zip(c, c[1:])) for c in combinations(range(n), d + 1))
    return sum(ok(p) for p in permutations(range(n)))


# closed forms: O(2) gives C(2k, k)/2, SL(2) = Sp(2) gives Catalan numbers,
# GL(d) on End(V^n) counts permutations avoiding a long decreasing run
@pytest.mark.parametrize("group,d,m,n,expected", [
    ("Sp", 2, 0, 4, catalan(2)),
    ("Sp", 2, 3, 3, catalan(3)),
    ("Sp", 4, 2, 2, 3),
    ("Sp", 4, 0, 6, 14),
    ("GL", 2, 2, 2, avoiders(2, 2)),
    ("GL", 2, 3, 3, avoiders(3, 2)),
    ("GL", 2, 4, 4, avoiders(4, 2)),
    ("GL", 3, 3, 3, avoiders(3, 3)),
    ("GL", 4, 3, 3, 6),
    ("O", 2, 4, 4, comb(8, 4) // 2),
    ("O", 3, 3, 3, 15),
    ("O", 1, 1, 1, 1),
    ("O", 2, 1, 2, 0),
])
def test_invariant_oracle(group, d, m, n, expected):
    assert invariant_dimension(group, d, m, n) == expected


def test_oracle_values_frozen():
    assert [avoiders(n, 2) for n in (2, 3, 4)] == [2, 5, 14]


def test_budget():
    with pytest.raises(BudgetError):
        invariant_dimension("O", 3, 5, 5)


def test_orthogonal_generators():
    F = EvalFunctor.make("symmetric", 2)
    assert F.evaluate(cap()) == ExactMatrix.from_rows([[1, 0, 0, 1]])
    assert F.evaluate(cup()) == ExactMatrix.from_rows([[1], [0], [0], [1]])
    assert F.loop_scalar == 2
    swap = F.evaluate(sym())
    assert swap @ swap == ExactMatrix.identity(4)
    assert F.evaluate(oplus(identity(1), identity(1))) == ExactMatrix.identity(4)


def test_skew_generators():
    S = EvalFunctor.make("skew", 4)
    assert S.loop_scalar == -4
    # crossing is minus the swap
    F = EvalFunctor.make("symmetric", 4)
    assert S.evaluate(sym()) == F.evaluate(sym()).scale(-1)


def test_functor_respects_composition():
    F = EvalFunctor.make("symmetric", 3)
    e = antisymmetrizer(2, 3)
    M = F.evaluate_lin(e)
    assert M @ M == M.scale(2)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_fft_small(d):
    F = EvalFunctor.make("symmetric", d)
    for m, n in [(0, 2), (1, 1), (2, 2), (1, 2), (3, 1)]:
        r = fft_check(F, m, n)
        assert r["ok"], r


def test_sft_examples():
    F = EvalFunctor.make("symmetric", 1)
    r = sft_check(F, 2, 2)
    assert r["ok"] and r["kernel_dim"] == 2 and r["ideal_dim"] == 2


@pytest.mark.parametrize("kind,d", [("symmetric", 1), ("symmetric", 2), ("symmetric", 3), ("skew", 2), ("skew", 4)])
def test_specialization(kind, d):
    F = EvalFunctor.make(kind, d)
    r = specialization_check(F)
    assert r["ok"]
    assert [row["delta"] for row in r["rows"] if row["factors"]] == [str(F.loop_scalar)]


def test_gl():
    assert gl_check(2, 2)["rank"] == 2
    r = gl_check(2, 3)
    assert r["ok"] and r["rank"] == 5 and r["kernel_dim"] == r["ideal_dim"] == 1


def test_symplectic_sp2():
    r = symplectic_check(2, 4)
    assert r["loop_scalar"] == "-2" and r["claimed_delta"] == "-1"
    rows = {(x["m"], x["n"]): x for x in r["rows"]}
    assert rows[(2, 2)]["kernel_dim"] == 1
    assert rows[(2, 2)]["oracle"] == catalan(2)


def test_ideal_kernel_o2():
    r = ca_ideal_kernel_check(EvalFunctor.make("symmetric", 2), 4)
    assert r["ok"]
    # up to K = 2 loops: grade 2k has 3 (2k-1)!! elements and C(2k, k)/2 invariants
    assert r["K"] == 2
    assert [g["kernel_dim"] for g in r["grades"]] == [3 - 1, 0, 3 - 1, 0, 9 - 3]


def test_polynomial_coefficients_read_at_loop_value():
    from brauerkit.exactlin import T
    from brauerkit.linear import LinDiagram

    F = EvalFunctor.make("symmetric", 3)
    x = LinDiagram.of(identity(1)).scale(T * T - 1)
    assert F.evaluate_lin(x) == ExactMatrix.identity(3).scale(8)
