import json

import pytest

from brauerkit.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_dims(capsys):
    code, out = run(capsys, "dims", "3", "3")
    assert code == 0
    rows = {(r["m"], r["n"]): r for r in json.loads(out.out)["table"]}
    assert rows[(3, 3)]["count"] == 15 == rows[(3, 3)]["formula"]
    assert rows[(1, 2)]["count"] == 0


def test_dims_csv(capsys):
    code, out = run(capsys, "dims", "1", "1", "--csv")
    assert out.out.splitlines() == ["m,n,count,formula", "0,0,1,1", "0,1,0,0", "1,0,0,0", "1,1,1,1"]


def test_eval_cap(capsys):
    code, out = run(capsys, "eval", "cap", "--kind", "symmetric", "--d", "2")
    assert code == 0
    assert json.loads(out.out)["matrix"] == [[1, 0, 0, 1]]


def test_eval_skew_loop(capsys):
    code, out = run(capsys, "eval", "cap * cup", "--kind", "skew", "--d", "2")
    assert json.loads(out.out)["matrix"] == [[-2]]


def test_ideal_slice(capsys):
    code, out = run(capsys, "ideal", "e(2)", "--delta", "1", "--bound", "4")
    rep = json.loads(out.out)
    assert code == 0
    assert rep["slices"]["1,1"]["dim"] == 0
    assert rep["slices"]["2,2"]["dim"] == 1


def test_compose(capsys):
    code, out = run(capsys, "compose", "cup", "cap")
    assert json.loads(out.out)["result"] == "0->0 : + 1"
    code, out = run(capsys, "compose", "id(1) ++ cup", "cap ++ id(1)")
    assert json.loads(out.out)["result"] == "1->1 : (s1 t1)"


def test_enumerate(capsys):
    code, out = run(capsys, "enumerate", "2", "2", "--csv")
    assert out.out.splitlines()[1:] == ["0,2->2 : (s1 s2)(t1 t2)", "1,2->2 : (s1 t1)(s2 t2)", "2,2->2 : (s1 t2)(s2 t1)"]


@pytest.mark.parametrize("argv", [
    ["check", "category-laws", "--max-points", "4", "--cases", "50"],
    ["check", "fft", "--kind", "symmetric", "--d", "3", "--max-total", "6"],
    ["check", "sft", "--kind", "symmetric", "--d", "1", "--mn", "2,2"],
    ["check", "gl", "--d", "2", "--mn", "3,3"],
    ["check", "parser", "--cases", "50"],
])
def test_suites_pass(capsys, argv):
    code, out = run(capsys, *argv)
    assert code == 0
    assert json.loads(out.out)["ok"] is True


def test_failing_oracle_exits_one(tmp_path, capsys):
    from brauerkit.circuit import EndomorphismCA, ca_to_json, perturbed
    from brauerkit.exactlin import ExactMatrix
    from brauerkit.tensor import EvalFunctor

    A = EndomorphismCA(EvalFunctor.make("symmetric", 2), max_grade=4)
    bad = perturbed(A, ("x",) * 4, 0, 1, ExactMatrix(4, 16, {0: {0: 1}}))
    path = tmp_path / "oracle.json"
    path.write_text(ca_to_json(bad))
    code, out = run(capsys, "check", "ca-axioms", "--oracle", str(path))
    rep = json.loads(out.out)
    assert code == 1 and not rep["ok"]
    assert rep["checks"]["c2"]["first_failure"] is not None


def test_errors_exit_two(capsys, monkeypatch):
    code, out = run(capsys, "eval", "cap *")
    assert code == 2 and "position 5" in out.err
    monkeypatch.setenv("BRAUERKIT_BUDGET", "10")
    code, out = run(capsys, "eval", "id(4)", "--d", "2")
    assert code == 2 and "budget" in out.err
    with pytest.raises(SystemExit) as err:
        main(["check", "nope"])
    assert err.value.code == 2


def test_out_file_and_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert main(["check", "category-laws", "--cases", "100", "--seed", "7", "--out", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text())["seed"] == 7
