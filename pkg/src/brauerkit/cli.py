"""Command-line front end.

Reports are JSON (sorted keys) on stdout or ``--out``; ``--csv`` switches
tables to CSV. ``check`` exits 0 iff every assertion of the suite passed,
1 on a failed assertion and 2 on usage or budget errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import List, Optional, Sequence

from .circuit import (
    EndomorphismCA,
    MatrixWheeledProp,
    ca_from_json,
    ca_to_wheeled_prop,
    check_ca_axioms,
    check_modular_operad,
    check_wheeled_prop,
    compare_props,
    derive_modular_operad,
    round_trip_check,
)
from .diagram import BrauerDiagram, compose, double_factorial, enumerate_diagrams, format_diagram
from .exactlin import ExactMatrix, Poly, format_scalar
from .expr import ElaborationError, ParseError, check_round_trip, elaborate, format_lin, parse
from .laws import check_category_laws, check_counts
from .linear import LinDiagram, ideal_saturate, lin_compose
from .palette import ColouredDiagram, Palette, coloured_compose, format_coloured, oriented_palette
from .tensor import (
    BudgetError,
    EvalFunctor,
    OrientedEvalFunctor,
    budget,
    ca_ideal_kernel_check,
    fft_check,
    gl_check,
    sft_check,
    specialization_check,
    symplectic_check,
)
from .wiring import check_operad_laws

SUITES = (
    "category-laws",
    "counts",
    "specialization",
    "fft",
    "sft",
    "gl",
    "symplectic",
    "ca-axioms",
    "modular-operad",
    "wheeled-prop",
    "operad-laws",
    "ideal-kernel",
    "parser",
)


class UsageError(ValueError):
    pass


# --------------------------------------------------------------------------
# output


def _jsonable(x):
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else str(x)
    if isinstance(x, Poly):
        return format_scalar(x)
    if isinstance(x, float):
        return x
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return str(x)


def _table(report: dict) -> List[dict]:
    """The flat table a report is rendered as under ``--csv``."""
    for key in ("table", "rows", "grades"):
        rows = report.get(key)
        if isinstance(rows, list) and rows and isinstance(rows[0], dict):
            return [{k: v for k, v in r.items() if not isinstance(v, (dict, list))} for r in rows]
    if "checks" in report:
        out = []
        for name, v in report["checks"].items():
            if isinstance(v, dict):
                out.append({"check": name, "count": v["count"], "failures": v["failures"]})
            else:
                out.append({"check": name, "ok": v})
        return out
    return [{k: v for k, v in report.items() if not isinstance(v, (dict, list))}]


def _emit(report: dict, args) -> None:
    data = _jsonable(report)
    if args.csv:
        rows = _table(data)
        buf = io.StringIO()
        fields: List[str] = []
        for r in rows:
            fields += [k for k in r if k not in fields]
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: json.dumps(v) if isinstance(v, bool) else v for k, v in r.items()})
        text = buf.getvalue()
    else:
        text = json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _matrix_rows(M: ExactMatrix) -> List[list]:
    return [[M[i, j] for j in range(M.ncols)] for i in range(M.nrows)]


# --------------------------------------------------------------------------
# argument helpers


def _mn(text: Optional[str]):
    if text is None:
        return None
    try:
        m, n = (int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"--mn expects 'm,n', got {text!r}") from None
    return m, n


def _palette(args) -> Optional[Palette]:
    if args.palette:
        with open(args.palette, encoding="utf-8") as fh:
            return Palette.from_json(fh.read())
    if args.kind == "gl":
        return oriented_palette()
    return None


def _functor(args, default_d: int = 2):
    d = default_d if args.d is None else args.d
    if args.kind == "gl":
        return OrientedEvalFunctor(d)
    return EvalFunctor.make(args.kind, d)


def _check_size(count: int, what: str):
    if count > budget():
        raise BudgetError(f"{what} has {count} entries > budget {budget()}")


def _elab(text: str, args):
    return elaborate(parse(text), palette=_palette(args),
                     delta=None if args.delta is None else Fraction(args.delta))


def _describe(x) -> dict:
    if isinstance(x, BrauerDiagram):
        return {"m": x.m, "n": x.n, "result": format_diagram(x)}
    if isinstance(x, ColouredDiagram):
        return {"m": x.m, "n": x.n, "result": format_coloured(x)}
    return {"m": x.m, "n": x.n, "result": format_lin(x),
            "terms": [{"coef": c, "diagram": format_diagram(f)} for f, c in x]}


# --------------------------------------------------------------------------
# subcommands


def cmd_compose(args) -> int:
    vals = [_elab(t, args) for t in args.exprs]
    out = vals[0]
    for v in vals[1:]:
        if out.n != v.m:
            raise ElaborationError(f"cannot compose {out.m}->{out.n} with {v.m}->{v.n}")
        if isinstance(out, ColouredDiagram):
            out = coloured_compose(out, v)
        elif isinstance(out, BrauerDiagram) and isinstance(v, BrauerDiagram):
            out = compose(out, v)
        else:
            delta = None if args.delta is None else Fraction(args.delta)
            a = out if isinstance(out, LinDiagram) else LinDiagram.of(out, delta)
            b = v if isinstance(v, LinDiagram) else LinDiagram.of(v, delta)
            out = lin_compose(a, b)
    _emit(_describe(out), args)
    return 0


def cmd_eval(args) -> int:
    x = _elab(args.expr, args)
    F = _functor(args)
    if isinstance(x, ColouredDiagram):
        M = F.evaluate_coloured(x)
    elif isinstance(x, LinDiagram):
        if not isinstance(F, EvalFunctor):
            raise UsageError("linear combinations evaluate under symmetric or skew forms only")
        M = F.evaluate_lin(x)
    else:
        if not isinstance(F, EvalFunctor):
            raise UsageError("--kind gl needs a coloured expression such as cup[+]")
        M = F.evaluate(x)
    rows = _matrix_rows(M)
    report = {"kind": args.kind, "d": F.d, "shape": [M.nrows, M.ncols], "matrix": rows}
    if args.csv:
        report["table"] = [{f"c{j}": v for j, v in enumerate(r)} for r in rows]
    _emit(report, args)
    return 0


def cmd_dims(args) -> int:
    rows = []
    for m in range(args.m_max + 1):
        for n in range(args.n_max + 1):
            expected = 0 if (m + n) % 2 else double_factorial(m + n - 1)
            _check_size(expected, f"Br({m},{n})")
            count = len(enumerate_diagrams(m, n))
            rows.append({"m": m, "n": n, "count": count, "formula": expected})
    _emit({"table": rows, "ok": all(r["count"] == r["formula"] for r in rows)}, args)
    return 0


def cmd_enumerate(args) -> int:
    total = double_factorial(args.m + args.n - 1) if (args.m + args.n) % 2 == 0 else 0
    _check_size(total * (args.max_closed + 1), f"BD({args.m},{args.n})")
    ds = enumerate_diagrams(args.m, args.n, args.max_closed)
    rows = [{"index": i, "diagram": format_diagram(f)} for i, f in enumerate(ds)]
    _emit({"m": args.m, "n": args.n, "count": len(ds), "table": rows}, args)
    return 0


def cmd_ideal(args) -> int:
    if args.delta is None:
        raise UsageError("ideal needs --delta")
    delta = Fraction(args.delta)
    gens = []
    for text in args.gens:
        x = elaborate(parse(text), delta=delta)
        gens.append(x if isinstance(x, LinDiagram) else LinDiagram.of(x, delta))
    bound = args.bound if args.bound is not None else 4
    _check_size(double_factorial(bound - 1), f"Br hom-sets up to {bound} points")
    ideal = ideal_saturate(gens, delta, bound)
    slices = {}
    table = []
    for (m, n), dim in ideal.dims().items():
        basis = [format_lin(v) for v in ideal.basis(m, n)]
        slices[f"{m},{n}"] = {"dim": dim, "basis": basis}
        table.append({"m": m, "n": n, "dim": dim})
    _emit({"delta": delta, "bound": bound, "generators": list(args.gens), "slices": slices,
           "table": table}, args)
    return 0


def _load_ca(args, grade: int):
    if args.oracle:
        with open(args.oracle, encoding="utf-8") as fh:
            return ca_from_json(fh.read()), "oracle file"
    F = _functor(args)
    return EndomorphismCA(F, max_grade=grade), f"{args.kind} d={F.d}"


def run_suite(args) -> dict:
    """Run one verification suite and return its report."""
    s = args.suite
    seed = args.seed
    if s == "category-laws":
        return check_category_laws(args.max_points or 4, args.cases or 1000, seed=seed)
    if s == "counts":
        return check_counts(args.max_total or 10)
    if s == "specialization":
        if args.kind == "gl":
            raise UsageError("specialization takes --kind symmetric or skew")
        return specialization_check(_functor(args))
    if s == "fft":
        if args.kind == "gl":
            raise UsageError("use 'check gl' for the general linear group")
        F = _functor(args)
        mn = _mn(args.mn)
        pairs = [mn] if mn else [(m, t - m) for t in range((args.max_total or 6) + 1) for m in range(t + 1)]
        rows = [fft_check(F, m, n) for m, n in pairs]
        return {"suite": "fft", "kind": args.kind, "d": F.d, "rows": rows, "ok": all(r["ok"] for r in rows)}
    if s == "sft":
        if args.kind == "gl":
            raise UsageError("use 'check gl' for the general linear group")
        F = _functor(args)
        mn = _mn(args.mn)
        total = 2 * F.d + 2 if args.max_total is None else args.max_total
        pairs = [mn] if mn else [(m, total - m) for m in range(total + 1)]
        rows = [sft_check(F, m, n, args.delta, args.bound) for m, n in pairs]
        return {"suite": "sft", "kind": args.kind, "d": F.d, "rows": rows, "ok": all(r["ok"] for r in rows)}
    if s == "gl":
        d = args.d or 2
        mn = _mn(args.mn)
        if mn and mn[0] != mn[1]:
            raise UsageError("gl checks End(V^n); pass --mn n,n")
        ns = [mn[0]] if mn else list(range(1, (args.max_total or d + 1) + 1))
        rows = [gl_check(d, n) for n in ns]
        return {"suite": "gl", "d": d, "rows": rows, "ok": all(r["ok"] for r in rows)}
    if s == "symplectic":
        ds = [args.d] if args.d else [2, 4]
        rows = [symplectic_check(d, args.max_total or 6) for d in ds]
        return {"suite": "symplectic", "rows": rows, "ok": all(r["ok"] for r in rows)}
    if s == "ca-axioms":
        A, what = _load_ca(args, args.max_total or 4)
        return check_ca_axioms(A, args.max_total or A.max_grade) | {"algebra": what}
    if s == "modular-operad":
        A, what = _load_ca(args, args.max_total or 4)
        return check_modular_operad(derive_modular_operad(A), args.max_total or A.max_grade) | {"algebra": what}
    if s == "wheeled-prop":
        d = args.d or 2
        legs = args.max_total or 3
        A = EndomorphismCA(OrientedEvalFunctor(d), max_grade=4)
        P = ca_to_wheeled_prop(A)
        parts = {
            "axioms": check_wheeled_prop(P, legs),
            "matrix_route": compare_props(P, MatrixWheeledProp(d), legs),
            "round_trip": round_trip_check(A, 4, legs),
        }
        return {"suite": "wheeled-prop", "d": d, **parts, "ok": all(p["ok"] for p in parts.values())}
    if s == "operad-laws":
        return check_operad_laws(random_cases=args.cases or 200, seed=seed)
    if s == "ideal-kernel":
        return ca_ideal_kernel_check(_functor(args), args.bound or 6)
    if s == "parser":
        return check_round_trip(args.cases or 1000, seed)
    raise UsageError(f"unknown suite {s!r}")


def cmd_check(args) -> int:
    report = run_suite(args)
    _emit(report, args)
    return 0 if report["ok"] else 1


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--kind", choices=["symmetric", "skew", "gl"], default="symmetric")
    common.add_argument("--d", type=int, default=None, help="dimension of V")
    common.add_argument("--delta", default=None, help="loop parameter, e.g. 2 or -1/2")
    common.add_argument("--max-total", type=int, default=None, help="bound on m+n or on the grade")
    common.add_argument("--mn", default=None, help="a single hom-set 'm,n'")
    common.add_argument("--bound", type=int, default=None, help="saturation bound N")
    common.add_argument("--palette", default=None, help="palette JSON file")
    common.add_argument("--oracle", default=None, help="circuit-algebra JSON file")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--csv", action="store_true", help="emit tables as CSV")
    common.add_argument("--out", default=None, help="write the report here")

    p = argparse.ArgumentParser(prog="brauerkit", description="Brauer diagrams, their linearisations and tensor evaluations.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compose", parents=[common], help="compose expressions in order (first applied first)")
    c.add_argument("exprs", nargs="+")
    c.set_defaults(func=cmd_compose)

    e = sub.add_parser("eval", parents=[common], help="evaluate an expression as a matrix")
    e.add_argument("expr")
    e.set_defaults(func=cmd_eval)

    dm = sub.add_parser("dims", parents=[common], help="table of dim Br(m, n)")
    dm.add_argument("m_max", type=int)
    dm.add_argument("n_max", type=int)
    dm.set_defaults(func=cmd_dims)

    en = sub.add_parser("enumerate", parents=[common], help="list the diagrams m -> n")
    en.add_argument("m", type=int)
    en.add_argument("n", type=int)
    en.add_argument("--max-closed", type=int, default=0)
    en.set_defaults(func=cmd_enumerate)

    idl = sub.add_parser("ideal", parents=[common], help="saturate an ideal of Br_delta")
    idl.add_argument("gens", nargs="+")
    idl.set_defaults(func=cmd_ideal)

    ck = sub.add_parser("check", parents=[common], help="run a verification suite")
    ck.add_argument("suite", choices=SUITES)
    ck.add_argument("--max-points", type=int, default=None)
    ck.add_argument("--cases", type=int, default=None, help="number of random cases")
    ck.set_defaults(func=cmd_check)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, ElaborationError, UsageError, BudgetError, ValueError) as exc:
        print(f"brauerkit: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
