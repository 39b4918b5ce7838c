import pytest

from brauerkit.circuit import (
    EndomorphismCA,
    MatrixWheeledProp,
    ca_from_json,
    ca_to_json,
    ca_to_wheeled_prop,
    check_ca_axioms,
    check_modular_operad,
    check_wheeled_prop,
    compare_props,
    derive_modular_operad,
    perturbed,
    round_trip_check,
    tabulate,
    trivial_ca,
    wheeled_prop_to_ca,
)
from brauerkit.exactlin import ExactMatrix
from brauerkit.palette import point_palette
from brauerkit.tensor import EvalFunctor, OrientedEvalFunctor


def failing(report):
    return sorted(k for k, v in report["checks"].items() if v["failures"])


@pytest.fixture(scope="module")
def o2():
    return EndomorphismCA(EvalFunctor.make("symmetric", 2), max_grade=4)


def test_trivial_algebra_passes():
    A = trivial_ca()
    assert check_ca_axioms(A)["ok"]
    assert check_modular_operad(derive_modular_operad(A))["ok"]


def test_orthogonal_endomorphism_algebra(o2):
    r = check_ca_axioms(o2)
    assert r["ok"], failing(r)
    assert {"c1_associativity", "c2", "c3_left", "c3_right", "e1_first", "e1_second"} <= set(r["checks"])
    m = check_modular_operad(derive_modular_operad(o2))
    assert m["ok"], failing(m)
    assert {"m1", "m2", "m3", "m4", "unit"} <= set(m["checks"])


def test_epsilon_is_the_cup(o2):
    # the unit for the product-then-contract operation is the pairing itself
    assert o2.epsilon("x") == ExactMatrix.from_rows([[1], [0], [0], [1]])
    assert o2.dim(("x", "x", "x")) == 8
    assert o2.contraction(("x", "x"), 0, 1) == ExactMatrix.from_rows([[1, 0, 0, 1]])


def test_contraction_rejects_bad_pairs(o2):
    with pytest.raises(IndexError):
        o2.contraction(("x", "x"), 0, 0)
    with pytest.raises(IndexError):
        o2.contraction(("x", "x"), 0, 2)


def test_perturbed_contraction_fails(o2):
    w = ("x", "x", "x", "x")
    E = ExactMatrix(4, 16, {0: {0: 1}})
    r = check_ca_axioms(perturbed(o2, w, 0, 1, E))
    assert not r["ok"]
    assert "c2" in failing(r)


def test_skew_algebra_needs_signs():
    S = EndomorphismCA(EvalFunctor.make("skew", 2), max_grade=4)
    assert S.odd
    r = check_ca_axioms(S)
    assert r["ok"], failing(r)
    # contraction is antisymmetric in its legs
    assert S.contraction(("x", "x"), 0, 1) == ExactMatrix.from_rows([[0, 1, -1, 0]])


def test_json_round_trip(o2):
    text = ca_to_json(o2, 3)
    B = ca_from_json(text)
    assert ca_to_json(B) == text
    T = tabulate(o2, 3)
    assert B.dims == T.dims and B.contractions == T.contractions and B.products == T.products
    assert check_ca_axioms(B)["ok"]


def test_wheeled_prop_bridge():
    A = EndomorphismCA(OrientedEvalFunctor(2), max_grade=4)
    P = ca_to_wheeled_prop(A)
    r = check_wheeled_prop(P, 3)
    assert r["ok"], failing(r)
    assert {"yanking", "superposing", "vanishing_unit", "vanishing_tensor"} <= set(r["checks"])
    assert compare_props(P, MatrixWheeledProp(2), 3)["ok"]
    rt = round_trip_check(A, 4, 3)
    assert rt["ok"], failing(rt)


def test_matrix_prop_yanking_by_hand():
    P = MatrixWheeledProp(2)
    # trace of the swap on V (x) V is the identity on V
    assert P.trace(1, 1, 1) @ P.symmetry(1, 1) == P.identity(1)
    assert P.trace(0, 0, 0) == ExactMatrix.identity(1)


def test_prop_to_ca_rejects_unoriented():
    with pytest.raises(ValueError):
        ca_to_wheeled_prop(trivial_ca(point_palette()))


def test_prop_ca_passes_axioms():
    B = wheeled_prop_to_ca(MatrixWheeledProp(2), 4)
    assert check_ca_axioms(B, 4)["ok"]
