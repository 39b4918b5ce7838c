"""Endomorphism circuit algebras and the wheeled prop bridge."""

from brauerkit.circuit import (
    EndomorphismCA,
    MatrixWheeledProp,
    ca_to_wheeled_prop,
    check_ca_axioms,
    compare_props,
    round_trip_check,
)
from brauerkit.tensor import EvalFunctor, OrientedEvalFunctor

A = EndomorphismCA(EvalFunctor.make("symmetric", 2), max_grade=4)
r = check_ca_axioms(A, 4)
print("O(2) endomorphism algebra:", "ok" if r["ok"] else "failed")
for name, c in sorted(r["checks"].items()):
    print(f"  {name}: {c['count']} instances")

# the skew form needs Koszul signs to satisfy the same axioms
S = EndomorphismCA(EvalFunctor.make("skew", 2), max_grade=4)
print("Sp(2) endomorphism algebra:", "ok" if check_ca_axioms(S, 4)["ok"] else "failed")

# oriented colours give a wheeled prop, matching plain matrices
B = EndomorphismCA(OrientedEvalFunctor(2), max_grade=4)
P = ca_to_wheeled_prop(B)
print("matches matrix prop:", compare_props(P, MatrixWheeledProp(2), 3)["ok"])
print("round trip CA -> prop -> CA:", round_trip_check(B, 4, 3)["ok"])
