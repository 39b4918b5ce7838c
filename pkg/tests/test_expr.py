import random

import pytest
from hypothesis import given, settings, strategies as st

from brauerkit.diagram import BrauerDiagram, cap, compose, cup, format_diagram, identity, oplus, sym
from brauerkit.exactlin import T
from brauerkit.expr import (
    ElaborationError,
    ParseError,
    check_round_trip,
    elaborate,
    format_expr,
    format_lin,
    parse,
    random_expression,
    random_literal,
)
from brauerkit.linear import LinDiagram, antisymmetrizer
from brauerkit.palette import Palette, coloured_cap, coloured_cup, coloured_compose

from conftest import diagrams


def ev(text, **kw):
    return elaborate(parse(text), **kw)


def test_literal_examples():
    assert ev("2->0:(s1 s2)") == cap()
    assert ev("0->0: + 2") == BrauerDiagram(0, 0, (), 2)
    assert ev("{2->2 : (s1 t2)(s2 t1)}") == sym()


def test_triangle_identity():
    assert ev("(cap ++ id(1)) * (id(1) ++ cup)") == identity(1)


def test_composition_applies_right_operand_first():
    assert ev("cap * cup") == compose(cup(), cap())
    assert ev("cup * cap") == compose(cap(), cup())
    assert ev("sym * sym * sym") == sym()


def test_atoms():
    assert ev("id(0)") == identity(0)
    assert ev("perm(1 2)") == sym()
    assert ev("perm[3](1 2 3)") == ev("{3->3 : (s1 t2)(s2 t3)(s3 t1)}")
    assert ev("perm[2]()") == identity(2)
    assert ev("cup ++ cap") == oplus(cup(), cap())


def test_linear_layer():
    assert ev("e(2)") == antisymmetrizer(2)
    assert ev("id(2) + (-1)·sym") == antisymmetrizer(2)
    assert ev("(t - 1)·id(1)") == LinDiagram.of(identity(1)).scale(T - 1)
    assert ev("cap * cup + (-1)·{0->0 :}", delta=3) == LinDiagram.of(BrauerDiagram(0, 0, ()), 3).scale(2)
    assert format_lin(ev("e(2)")) == "1·{2->2 : (s1 t1)(s2 t2)} + (-1)·{2->2 : (s1 t2)(s2 t1)}"


def test_named_generators():
    assert ev("f * f", env={"f": sym()}) == identity(2)
    with pytest.raises(ElaborationError):
        ev("g")


def test_coloured_atoms():
    pal = Palette.make(["c", "d"], {"c": "d"})
    f = ev("cap[c] * cup[c]", palette=pal)
    assert f == coloured_compose(coloured_cup(pal, "c"), coloured_cap(pal, "c"))
    assert f.closed_orbits == ("c",)
    with pytest.raises(ElaborationError):
        ev("cap[c] * cup[d]", palette=pal)


def test_canonical_printing():
    for text in ["cap", "3/2·sym + (-1)·id(2)", "cap ++ id(1) * id(1) ++ cup", "perm[3](1 2 3)",
                 "cup ++ {2->0 : (s1 s2)}", "2->0 : (s1 s2)", "(t^2 - 1)·e(3)", "sym[c d] * id[d c]"]:
        assert format_expr(parse(text)) == text
    assert format_expr(parse("2 -> 0 : ( s1 s2 )")) == "2->0 : (s1 s2)"
    assert format_expr(parse("perm(2 1)")) == "perm[2](1 2)"
    # ++ binds tighter than *
    assert format_expr(parse("(cap ++ id(1)) * (id(1) ++ cup)")) == "cap ++ id(1) * id(1) ++ cup"
    assert format_expr(parse("cap ++ (id(1) * id(1)) ++ cup")) == "cap ++ (id(1) * id(1)) ++ cup"


@pytest.mark.parametrize("text,pos", [
    ("cap *", 5),
    ("id(", 3),
    ("cup ++ ) ", 7),
    ("3·", 2),
    ("cap $ cup", 4),
])
def test_errors_carry_positions(text, pos):
    with pytest.raises(ParseError) as err:
        parse(text)
    assert err.value.pos == pos


def test_arity_errors():
    with pytest.raises(ElaborationError):
        ev("sym * cap")
    with pytest.raises(ElaborationError):
        ev("id(1) + sym")


def test_round_trip_suite():
    r = check_round_trip(200, seed=3)
    assert r["ok"] and r["failures"] == 0 and r["cases"] == 200


@given(diagrams())
def test_literal_round_trip(f):
    text = format_diagram(f)
    assert format_expr(parse(text)) == text
    assert ev(text) == f


@settings(max_examples=200)
@given(st.integers(0, 2 ** 32))
def test_random_expression_round_trip(seed):
    rng = random.Random(seed)
    pal = Palette.make(["a", "b", "c"], {"b": "c"})
    for node in (random_expression(rng), random_expression(rng, palette=pal), random_literal(rng, palette=pal)):
        text = format_expr(node)
        assert parse(text) == node
        assert format_expr(parse(text)) == text
