from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

from arrange.arrangement import b_alpha_beta, fano
from arrange.cli import run


def call(*argv):
    buf = io.StringIO()
    code = run(list(argv), stdout=buf)
    return code, buf.getvalue()


def call_json(*argv):
    code, out = call(*argv, "--json")
    assert code == 0, out
    return json.loads(out)


def test_obstruct_pp_p3(validate_schema):
    d = call_json("obstruct", "pp", "--p", "3")
    validate_schema(d, "obstruction-report")
    assert d["verdict"] == "Obstructed" and d["b2_total"] == 22
    assert d["witness"]["lower_bound"] == 27


def test_gen_bpab(validate_schema):
    d = call_json("gen", "bpab", "--p", "2", "--alpha", "2", "--beta", "2")
    validate_schema(d, "arrangement")
    assert (d["lines"], d["points"]) == (8, 18)


def test_wiring_canon(validate_schema):
    d = call_json("wiring", "canon", "--word", "t2 t1 t2", "--n", "3")
    validate_schema(d, "wiring")
    assert d["canonical"] == "n=3; t1 t2 t1"
    assert d["events"] == [{"kind": "BraidMove1", "position": 0}]


def test_wiring_homotopy_and_svg(validate_schema):
    d = call_json("wiring", "homotopy", "--word", "n=4; m(1,3) t3 t2 t1")
    validate_schema(d, "wiring")
    assert d["final"] == "n=4; m(1,4)"
    code, out = call("wiring", "svg", "--word", "t1", "--n", "2")
    assert code == 0 and out.startswith("<svg")


def test_wiring_from_order():
    assert call_json("wiring", "from-order", "--family", "fano") == {"wirable": False}
    d = call_json("wiring", "from-order", "--family", "generic:3")
    assert d["wirable"] and d["text"].startswith("n=3;")
    d = call_json("wiring", "from-order", "--family", "pencil:4",
                  "--line-order", "0,1,2,3", "--point-order", "0")
    assert d["text"] == "n=4; m(1,4)"


def test_gen_commands(validate_schema):
    validate_schema(call_json("gen", "pp", "--p", "2"), "arrangement")
    d = call_json("gen", "nk-search", "--n", "9", "--k", "3")
    validate_schema(d, "nk-search")
    assert d["classes"] == 3 and d["complete"]
    r1 = call("gen", "random", "--lines", "7", "--seed", "5")
    assert r1 == call("gen", "random", "--lines", "7", "--seed", "5")


def test_code_commands(validate_schema):
    d = call_json("code", "minweight", "--family", "pp:3", "--d", "3")
    validate_schema(d, "code-summary")
    assert d["min_weight"] == 6 and d["count_min_weight"] == 156
    d = call_json("code", "basis", "--family", "bpab:2,1,1", "--d", "2")
    assert d["dimension"] == 1 and d["basis"] == [[1, 1, 1, 1]]
    d = call_json("code", "basis", "--family", "fano", "--blown", "none")
    assert d["dimension"] == 6


def test_obstruct_deletion_and_custom(validate_schema, tmp_path):
    d = call_json("obstruct", "deletion", "--p", "3", "--t", "2")
    validate_schema(d, "obstruction-report")
    assert d["verdict"] == "Obstructed"
    assert call_json("obstruct", "deletion", "--p", "3", "--t", "3")["verdict"] == "NotObstructed"
    path = tmp_path / "fano.json"
    path.write_text(fano().to_json())
    d = call_json("obstruct", "custom", "--in", str(path), "--p", "2", "--blown", "all")
    validate_schema(d, "obstruction-report")
    assert d["verdict"] == "Obstructed"
    d = call_json("obstruct", "custom", "--family", "fano", "--search", "--primes", "2",
                  "--max-ab", "1")
    assert d["obstructed"]


def test_obstruct_custom_embedding_file(tmp_path):
    from arrange.obstruct import standard_branch

    emb = standard_branch(2)
    path = tmp_path / "emb.json"
    path.write_text(json.dumps(emb.to_dict()))
    d = call_json("obstruct", "custom", "--family", "pp:2", "--embedding", str(path),
                  "--blown", "all")
    assert set(d["branch_lines"]) == set(emb.line_map)


def test_plumbing_commands(validate_schema):
    d = call_json("plumbing", "matrix", "--family", "fano")
    validate_schema(d, "plumbing")
    assert d["k"] == 7 and d["N"] == 7
    d = call_json("plumbing", "gs", "--family", "bpab:2,2,2")
    assert d["all_ones"]["positive"] and d["certificate"]["method"] == "all-ones"


def test_symplectic_commands(validate_schema):
    d = call_json("symplectic", "area", "--expr", "2", "--r", "0.5", "--t", "0.1")
    assert d["values"][0]["value"] == 1.0
    d = call_json("symplectic", "epsilon", "--steep", "8", "--nr", "21", "--nt", "101")
    validate_schema(d, "epsilon")
    assert 0 < d["epsilon"] < 1
    code, out = call("symplectic", "epsilon", "--steep", "8")
    assert code == 0 and "epsilon = 0.125" in out


@pytest.mark.parametrize("argv", [
    ["obstruct", "pp", "--p", "4"],
    ["gen", "pp", "--p", "6"],
    ["code", "basis", "--family", "nonsense"],
    ["code", "basis"],
    ["code", "basis", "--family", "fano", "--d", "4"],
    ["code", "basis", "--in", "/nonexistent/file.json"],
    ["wiring", "canon", "--word", "t1 t1", "--n", "2"],
    ["wiring", "canon", "--word", "t1 t2"],
    ["obstruct", "deletion", "--p", "3", "--t", "20"],
    ["symplectic", "epsilon"],
    ["plumbing", "matrix", "--family", "generic:x"],
])
def test_input_errors_exit_2(argv):
    code, _ = call(*argv)
    assert code == 2


def test_bad_json_input(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    assert call("plumbing", "matrix", "--in", str(path))[0] == 2
    path.write_text(json.dumps({"lines": 2, "points": 1, "incidence": [[1], [0]]}))
    assert call("plumbing", "matrix", "--in", str(path))[0] == 2


def test_usage_error_exit_2():
    assert call("no-such-group")[0] == 2
    assert call("obstruct", "pp")[0] == 2


def test_internal_error_exit_1(monkeypatch):
    import arrange.obstruct as ob

    def broken(p):
        raise AssertionError("invariant broken")

    monkeypatch.setattr(ob, "obstruct_projective_plane", broken)
    assert call("obstruct", "pp", "--p", "2")[0] == 1


@pytest.mark.parametrize("argv", [
    ["obstruct", "pp", "--p", "2", "--json"],
    ["plumbing", "gs", "--family", "bpab:2,2,2", "--json"],
    ["wiring", "homotopy", "--word", "t2 t1 t2", "--n", "3", "--json"],
    ["symplectic", "epsilon", "--steep", "4", "--json", "--nr", "11", "--nt", "51"],
])
def test_deterministic_output(argv):
    assert call(*argv) == call(*argv)


def test_out_file(tmp_path):
    path = tmp_path / "out.json"
    code, out = call("gen", "bpab", "--p", "2", "--alpha", "1", "--beta", "1", "--json",
                     "--out", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["lines"] == 4
    from arrange.arrangement import Arrangement

    assert Arrangement.from_json(path.read_text()) == b_alpha_beta(2, 1, 1)


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "arrange.cli", "obstruct", "pp", "--p", "2"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and "verdict: Obstructed" in res.stdout
