from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from brauerkit.diagram import (
    ArityError,
    BrauerDiagram,
    Permutation,
    boundary_cospan,
    cap,
    cap_n,
    coev,
    compose,
    compose_all,
    cup,
    cup_n,
    diagram_permutation,
    double_factorial,
    empty,
    enumerate_diagrams,
    ev,
    format_diagram,
    generators,
    identity,
    is_downward,
    is_open,
    is_planar,
    loop,
    matchings,
    oplus,
    parse_diagram,
    permutation_diagram,
    predicates,
    pushout_components,
    rotate,
    sym,
    transpose,
)

from conftest import composable, diagrams, naive_compose

P = parse_diagram


# examples --------------------------------------------------------------


def test_cup_then_cap_is_a_loop():
    assert compose(cup(), cap()) == BrauerDiagram(0, 0, (), 1)


def test_compose_with_identity():
    for f in enumerate_diagrams(2, 2, 1) + enumerate_diagrams(1, 3):
        assert compose(f, identity(f.n)) == f


def test_sym_then_cap_is_cap():
    assert compose(sym(), cap()) == cap()


def test_compose_arity_mismatch():
    with pytest.raises(ArityError):
        compose(cap(), sym())


def test_oplus_examples():
    assert oplus(identity(1), identity(1)) == identity(2)
    f = P("2->2 : (s1 t2)(s2 t1)")
    assert oplus(f, loop(3)) == f.with_closed(3)
    assert oplus(cup(), cap()) == P("2->2 : (s1 s2)(t1 t2)")


def test_generators():
    g = generators()
    assert set(g) == {"id1", "cup", "cap", "sym"}
    assert compose(g["sym"], g["sym"]) == identity(2)
    zigzag = compose(oplus(identity(1), cup()), oplus(cap(), identity(1)))
    assert zigzag == identity(1)


def test_generators_reach_small_homs():
    # words of layers id + g + id reach every open diagram with <= 4 points
    # (intermediate arities stay <= 4)
    layers = {}
    for k in range(5):
        for a in range(k + 1):
            for name, g in generators().items():
                if name == "id1":
                    continue
                b = k - a - g.m
                if b >= 0:
                    layers.setdefault(k, []).append(oplus(oplus(identity(a), g), identity(b)))
    reached = {identity(k) for k in range(5)}
    frontier = list(reached)
    while frontier:
        f = frontier.pop()
        for layer in layers.get(f.n, []):
            h = compose(f, layer).open_part()
            if h.n <= 4 and h not in reached:
                reached.add(h)
                frontier.append(h)
    for m, n in product(range(5), repeat=2):
        if m + n <= 4:
            assert set(enumerate_diagrams(m, n)) <= reached


def test_permutation_diagram_examples():
    assert permutation_diagram(Permutation.identity(3)) == identity(3)
    assert permutation_diagram(Permutation.from_cycles(2, [(1, 2)])) == sym()
    assert permutation_diagram(Permutation.from_cycles(3, [(1, 2, 3)])) == P("3->3 : (s1 t2)(s2 t3)(s3 t1)")


@given(st.permutations(range(5)), st.permutations(range(5)))
def test_permutation_diagram_is_contravariant(p, q):
    p, q = Permutation(tuple(p)), Permutation(tuple(q))
    assert permutation_diagram(p * q) == compose(permutation_diagram(q), permutation_diagram(p))
    assert diagram_permutation(permutation_diagram(p)) == p


def test_transpose_examples():
    assert transpose(identity(1)) == identity(1)
    assert transpose(sym()) == sym()
    assert transpose(cap()) == cup()
    assert compose(coev(identity(2)), ev(identity(2))) == BrauerDiagram(0, 0, (), 2)
    assert ev(identity(2)) == cap_n(2)
    assert coev(identity(2)) == cup_n(2)


@pytest.mark.parametrize("n", range(5))
def test_n_fold_triangle(n):
    left = compose(oplus(identity(n), cup_n(n)), oplus(cap_n(n), identity(n)))
    right = compose(oplus(cup_n(n), identity(n)), oplus(identity(n), cap_n(n)))
    assert left == identity(n) == right


def test_predicates_examples():
    assert predicates(cap()) == {"is_open": True, "is_downward": True, "is_upward": False, "is_planar": True}
    assert predicates(sym()) == {"is_open": True, "is_downward": True, "is_upward": True, "is_planar": False}
    assert not is_open(loop(1))


def test_planar_counts_are_catalan():
    # non-crossing matchings on 2k points: Catalan numbers 1, 1, 2, 5, 14
    for total, cat in [(0, 1), (2, 1), (4, 2), (6, 5), (8, 14)]:
        for m in range(total + 1):
            assert sum(is_planar(f) for f in enumerate_diagrams(m, total - m)) == cat


def test_boundary_cospan_examples():
    c = boundary_cospan(identity(2))
    assert c.components == 2 and c.fibre_sizes() == [2, 2]
    c = boundary_cospan(loop(1))
    assert c.components == 1 and c.fibre_sizes() == [0]
    assert boundary_cospan(oplus(cup(), cap())).components == 2


def test_enumerate_examples():
    assert len(enumerate_diagrams(2, 2, 0)) == 3
    assert enumerate_diagrams(1, 2, 0) == []
    assert len(enumerate_diagrams(3, 3, 0)) == 15
    assert len(enumerate_diagrams(0, 0, 3)) == 4


@pytest.mark.parametrize("total", range(0, 11, 2))
def test_enumerate_counts_match_brute_force(total):
    # independent count: pairings built greedily by brute-force recursion
    def count(points):
        if not points:
            return 1
        return sum(count(points[1:i] + points[i + 1:]) for i in range(1, len(points)))

    expected = count(list(range(total)))
    assert expected == double_factorial(total - 1)
    for m in range(total + 1):
        fs = enumerate_diagrams(m, total - m)
        assert len(fs) == len(set(fs)) == expected
        assert fs == sorted(fs)


def test_matchings_order():
    assert list(matchings([0, 1, 2, 3])) == [((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))]


def test_text_form():
    assert format_diagram(cap()) == "2->0 : (s1 s2)"
    assert format_diagram(loop(2)) == "0->0 : + 2"
    assert format_diagram(empty()) == "0->0 :"
    assert P("  2 ->2:( s1 t2 ) (s2  t1)") == sym()
    for bad in ["2->2 : (s1 t1)", "2->0 : (s1 s3)", "1->1 (s1 t1)", "0->0 : + 1 (s1 s2)", "2->0 : (s1 s1)"]:
        with pytest.raises(ValueError):
            P(bad)


def test_validation():
    with pytest.raises(ValueError):
        BrauerDiagram(1, 0, ())
    with pytest.raises(ValueError):
        BrauerDiagram(2, 0, ((0, 1),), -1)


# properties ---------------------------------------------------------


@settings(max_examples=300)
@given(composable(2))
def test_compose_matches_graph_gluing(fg):
    f, g = fg
    assert compose(f, g) == naive_compose(f, g)


@settings(max_examples=300)
@given(composable(3))
def test_associativity(fgh):
    f, g, h = fgh
    assert compose(compose(f, g), h) == compose(f, compose(g, h))


@given(diagrams())
def test_units(f):
    assert compose(identity(f.m), f) == f == compose(f, identity(f.n))


@settings(max_examples=200)
@given(composable(2, 4), composable(2, 4))
def test_interchange(a, b):
    (f1, g1), (f2, g2) = a, b
    assert compose(oplus(f1, f2), oplus(g1, g2)) == oplus(compose(f1, g1), compose(f2, g2))


@given(composable(2))
def test_transpose_contravariant(fg):
    f, g = fg
    assert transpose(compose(f, g)) == compose(transpose(g), transpose(f))


@given(diagrams())
def test_transpose_is_rotation(f):
    assert transpose(f) == rotate(f)
    assert transpose(transpose(f)) == f


@given(diagrams())
def test_text_round_trip(f):
    assert parse_diagram(format_diagram(f)) == f


@given(composable(2, 6))
def test_downward_closed_and_pushout(fg):
    f, g = (x.open_part() for x in fg)
    if is_downward(f) and is_downward(g):
        h = compose(f, g)
        assert is_downward(h)
        assert is_downward(oplus(f, g))
        comps = pushout_components(f, g)
        assert all(comps)
        assert sorted(sorted(c) for c in comps) == sorted(list(p) for p in h.pairs)


@given(composable(2, 6))
def test_pushout_matches_compose(fg):
    f, g = fg
    h = compose(f, g)
    comps = pushout_components(f, g)
    assert sorted(sorted(c) for c in comps if c) == sorted(list(p) for p in h.pairs)
    assert sum(1 for c in comps if not c) == h.closed


def test_compose_all_and_braid():
    s1, s2 = oplus(sym(), identity(1)), oplus(identity(1), sym())
    assert compose_all(s1, s2, s1) == compose_all(s2, s1, s2)
