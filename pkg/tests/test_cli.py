import json

import pytest
from click.testing import CliRunner

from rigidacm.cli import main
from rigidacm.fieldlinalg import field_from_name
from rigidacm.sheafcx import direct_sum, ek_bundle, line_bundle


def run(*args):
    return CliRunner().invoke(main, list(args))


def run_json(*args):
    res = run("--format", "json", *args)
    assert res.exit_code == 0, res.output
    return json.loads(res.output)


def test_fib():
    assert run_json("fib", "--l", "3", "--k-max", "6")["values"] == [0, 1, 3, 8, 21, 55, 144]
    assert run_json("fib", "--l", "6", "--k-max", "3")["values"] == [0, 1, 6, 35]
    assert run_json("fib", "--l", "3", "--k-max", "0")["values"] == [0]


def test_fib_table_headers():
    out = run("fib", "--l", "3", "--k-max", "2").output.splitlines()
    assert out[0].split() == ["k", "a_{3,k-1}", "a_{3,k}"]
    assert out[-1].split() == ["2", "1", "3"]


def test_kron():
    assert run("kron", "decompose", "--l", "3", "--dim", "1,4").output.strip() == "R_1 + R_2"
    assert run("kron", "decompose", "--l", "3", "--dim", "1,1").output.strip() == "not rigid"
    out = run_json("kron", "ext", "--l", "3", "--dim", "1,3", "--self")
    assert (out["hom"], out["ext"]) == (1, 0)


def test_bundle_actions():
    out = run_json("bundle", "--family", "fib", "--n", "2", "--k", "2", "--action", "ext", "--other", "fib:2:1")
    assert out["ext"] == [0, 0, 0]
    out = run_json("bundle", "--family", "ek", "--n", "2", "--k", "3", "--action", "acm", "--d", "3")
    assert out["acm"] and out["dual_acm"]
    out = run_json("bundle", "--family", "fib", "--n", "2", "--k", "0", "--action", "chern")
    assert out["chern"] == [1, -1, 0]
    out = run_json("--window", "-2:0", "bundle", "--family", "fib", "--n", "2", "--k", "1",
                   "--action", "cohomology")
    assert out["cohomology"]["h"]["1,-1"] == 1


def test_bundle_not_acm_exits_3():
    res = run("bundle", "--family", "omega", "--n", "2", "--k", "1", "--action", "acm", "--d", "1")
    assert res.exit_code == 3


def test_classify_files(tmp_path):
    f = field_from_name("prime", 0)
    p = tmp_path / "o5.json"
    p.write_text(line_bundle(2, 5, f).dumps())
    out = run_json("classify", str(p))
    assert (out["case"], out["s"]) == ("LineBundle", -5)
    p.write_text(ek_bundle(2, 2, f).dumps())
    out = run_json("classify", str(p), "--d", "3")
    assert (out["case"], out["a"], out["b"], out["rigid"]) == ("SteinerE", 3, 1, [[2, 1]])
    assert out["acm"]["ok"]
    p.write_text(direct_sum(ek_bundle(2, 2, f), line_bundle(2, 0, f)).dumps())
    out = run_json("classify", str(p))
    assert any("decomposable" in w for w in out["warnings"])


def test_acm_check_file(tmp_path):
    p = tmp_path / "e.json"
    p.write_text(ek_bundle(3, 2, field_from_name("prime", 0)).dumps())
    assert run_json("acm-check", str(p), "--d", "2")["acm"]


def test_veronese4():
    out = run_json("veronese4", "--chern", "2,-1,1", "--d", "4")
    assert out["delta"] == "4"
    assert out["t"] == 0 and out["bad_twists"] == [-1]


@pytest.mark.parametrize("args,code", [
    (["fib", "--l", "1", "--k-max", "2"], 2),
    (["kron", "decompose", "--l", "3", "--dim", "x"], 2),
    (["kron", "decompose", "--l", "3", "--dim", "0,0"], 2),
    (["veronese4", "--chern", "2,0,1", "--d", "4"], 2),
    (["--window", "3:1", "fib", "--l", "3", "--k-max", "1"], 2),
    (["kron", "ext", "--l", "6", "--dim", "6930,1189", "--self"], 4),
])
def test_exit_codes(args, code):
    assert run(*args).exit_code == code


def test_bad_file_exits_2(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"n": 2, "terms": ')
    assert run("classify", str(p)).exit_code == 2


def test_outputs_are_deterministic():
    args = ["--seed", "7", "--format", "json", "bundle", "--family", "ek", "--n", "2", "--k", "3", "--action", "json"]
    assert run(*args).output == run(*args).output
    a = run("--seed", "7", "--format", "json", "kron", "decompose", "--l", "3", "--dim", "3,8").output
    assert a == run("--seed", "7", "--format", "json", "kron", "decompose", "--l", "3", "--dim", "3,8").output
