"""The twelve acceptance criteria, each run exactly and reported on one line.

Run under pytest, or directly with ``python3 tests/test_acceptance.py``.
"""

import time

import pytest

from brauerkit.circuit import (
    EndomorphismCA,
    MatrixWheeledProp,
    ca_to_wheeled_prop,
    check_ca_axioms,
    check_modular_operad,
    check_wheeled_prop,
    compare_props,
    derive_modular_operad,
    round_trip_check,
)
from brauerkit.expr import check_round_trip
from brauerkit.laws import check_category_laws, check_counts
from brauerkit.tensor import (
    EvalFunctor,
    OrientedEvalFunctor,
    ca_ideal_kernel_check,
    fft_check,
    gl_check,
    sft_check,
    specialization_check,
    symplectic_check,
)
from brauerkit.wiring import check_operad_laws


def _failed(report):
    return [k for k, v in report.get("checks", {}).items() if v["failures"]]


def criterion_1():
    r = check_counts(max_total=10, max_square=5)
    square = ", ".join(str(s["dim"]) for s in r["square"])
    return r["ok"], f"counts for m+n <= 10 match (m+n-1)!!; dim Br(n,n) = {square}", 10


def criterion_2():
    r = check_category_laws(max_points=4, random_cases=1000, random_points=8, max_triangle=4, seed=0)
    total = sum(v["count"] for v in r["checks"].values())
    return r["ok"], f"{total} law instances, failing: {_failed(r) or 'none'}", 30


def criterion_3():
    parts, ok = [], True
    for kind, d in [("symmetric", 1), ("symmetric", 2), ("symmetric", 3), ("skew", 2), ("skew", 4)]:
        r = specialization_check(EvalFunctor.make(kind, d))
        hits = [row["delta"] for row in r["rows"] if row["factors"]]
        ok &= r["ok"] and hits == [r["loop_scalar"]]
        parts.append(f"{kind[:3]} d={d}: {','.join(hits)}")
    return ok, "factors exactly at " + "; ".join(parts), None


def criterion_4():
    ok, n = True, 0
    for d in (1, 2, 3):
        F = EvalFunctor.make("symmetric", d)
        for total in range(7):
            for m in range(total + 1):
                r = fft_check(F, m, total - m)
                ok &= r["ok"]
                n += 1
    return ok, f"{n} hom-sets, rank = oracle, injective for m+n <= 2d, odd vanish", 120


def criterion_5():
    ok, parts = True, []
    for d in (1, 2):
        F = EvalFunctor.make("symmetric", d)
        rows = [sft_check(F, m, 2 * d + 2 - m) for m in range(2 * d + 3)]
        ok &= all(r["ok"] for r in rows)
        parts.append(f"d={d}: kernel dims {[r['kernel_dim'] for r in rows]}")
    return ok, "kernel = <e(d+1)> slice; " + "; ".join(parts), 120


def criterion_6():
    ok, parts = True, []
    for d in (2, 4):
        r = symplectic_check(d, max_total=6)
        rows = r["rows"]
        ok &= r["ok"] and all(row["verdict"] in ("equal", "differs", "out of bound") for row in rows)
        verdicts = sorted(set(r["verdicts"].values()))
        sym = all(row.get("symmetrizer_equal") for row in rows)
        parts.append(f"d={d}: loop {r['loop_scalar']} vs claimed {r['claimed_delta']}, "
                     f"<e({int(r['loop_scalar'].lstrip('-')) + 1})> {'/'.join(verdicts)}, "
                     f"<s({d + 1})> {'equal' if sym else 'differs'}")
    return ok, "; ".join(parts), None


def criterion_7():
    r2, r3 = gl_check(2, 2), gl_check(2, 3)
    ok = (r2["ok"] and r2["rank"] == 2 and r2["kernel_dim"] == 0
          and r3["ok"] and r3["rank"] == 5 and r3["kernel_dim"] == r3["ideal_dim"] == 1
          and r3["checks"]["walled_agree"] and r3["checks"]["oriented_matches_direct"])
    return ok, f"rank {r2['rank']} at n=2, rank {r3['rank']} and kernel = <e(3)> at n=3, walled forms agree", None


def criterion_8():
    ok, parts = True, []
    for d in (2, 3):
        A = EndomorphismCA(EvalFunctor.make("symmetric", d), max_grade=4)
        ca = check_ca_axioms(A, 4)
        mo = check_modular_operad(derive_modular_operad(A), 4)
        ok &= ca["ok"] and mo["ok"]
        ok &= {"c2", "c3_left", "c3_right", "e1_first", "e1_second"} <= set(ca["checks"])
        ok &= {"m1", "m2", "m3", "m4"} <= set(mo["checks"])
        n = sum(v["count"] for v in ca["checks"].values()) + sum(v["count"] for v in mo["checks"].values())
        parts.append(f"d={d}: {n} instances, failing {_failed(ca) + _failed(mo) or 'none'}")
    return ok, "; ".join(parts), 60


def criterion_9():
    A = EndomorphismCA(OrientedEvalFunctor(2), max_grade=4)
    P = ca_to_wheeled_prop(A)
    ax = check_wheeled_prop(P, 3)
    direct = compare_props(P, MatrixWheeledProp(2), 3)
    rt = round_trip_check(A, 4, 3)
    ok = ax["ok"] and direct["ok"] and rt["ok"]
    ok &= {"vanishing_unit", "vanishing_tensor", "superposing", "yanking"} <= set(ax["checks"])
    return ok, (f"axioms failing {_failed(ax) or 'none'}; matches matrix prop: {direct['ok']}; "
                f"round trip: {rt['ok']}"), None


def criterion_10():
    r = check_operad_laws(max_blocks=2, max_block=2, random_cases=200, seed=0)
    need = {"associativity", "left_unit", "right_unit", "equivariance", "connected_closed", "downward_closed"}
    ok = r["ok"] and need <= set(r["checks"])
    return ok, f"failing: {_failed(r) or 'none'}", None


def criterion_11():
    r = ca_ideal_kernel_check(EvalFunctor.make("symmetric", 2), 6)
    dims = [g["kernel_dim"] for g in r["grades"]]
    return r["ok"], f"kernel = closure of {{loop - 2, coev e(3)}} at grades 0..6, kernel dims {dims}", 300


def criterion_12():
    r = check_round_trip(1000, seed=0)
    return r["ok"], f"{r['cases']} expressions and {r['literal_cases']} literals, {r['failures']} failures", None


CRITERIA = [globals()[f"criterion_{i}"] for i in range(1, 13)]


def run(i):
    t = time.perf_counter()
    ok, detail, limit = CRITERIA[i - 1]()
    dt = time.perf_counter() - t
    if limit is not None and dt >= limit:
        ok = False
        detail += f" (over the {limit} s limit)"
    line = f"{'PASS' if ok else 'FAIL'} criterion {i}: {detail} [{dt:.1f} s]"
    return ok, line


@pytest.mark.parametrize("i", range(1, 13))
def test_criterion(i, capsys):
    ok, line = run(i)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [run(i) for i in range(1, 13)]
    for _, line in results:
        print(line)
    raise SystemExit(0 if all(ok for ok, _ in results) else 1)
