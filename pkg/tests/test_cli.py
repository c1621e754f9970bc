import json

import pytest

from skeleta.cli import main

SIMPLEX = "semiring over Zv; gens X1 contracting, X2 contracting; rel X1 + X2 = -1;\n"
BXY = "semiring over B; gens X contracting, Y contracting;\n"


def run(capsys, *args):
    with pytest.raises(SystemExit) as info:
        main(list(args))
    return info.value.code, capsys.readouterr().out


@pytest.fixture
def simplex_file(tmp_path):
    p = tmp_path / "simplex2.sk"
    p.write_text(SIMPLEX)
    return str(p)


@pytest.fixture
def bxy_file(tmp_path):
    p = tmp_path / "bxy.sk"
    p.write_text(BXY)
    return str(p)


def test_spec_of_the_simplex(capsys, simplex_file):
    code, out = run(capsys, "spec", simplex_file)
    data = json.loads(out)
    assert code == 0
    assert data["schema"] == "skeleta/1" and data["count"] == 3


def test_spec_text_and_naive(capsys, bxy_file):
    code, out = run(capsys, "--format", "text", "spec", bxy_file)
    assert code == 0 and out == "4 points\n"
    code, out = run(capsys, "spec", bxy_file, "--naive")
    assert json.loads(out)["method"] == "enumeration"


def test_normalize_and_eq(capsys, bxy_file):
    code, out = run(capsys, "--format", "text", "normalize", bxy_file, "X v X + Y")
    assert code == 0 and out == "X\n"
    code, out = run(capsys, "eq", bxy_file, "X", "Y")
    d = json.loads(out)
    assert code == 0 and d["result"] == "Distinct" and d["witness"]["kind"] == "B-point"
    code, out = run(capsys, "--format", "text", "eq", bxy_file, "X v X + Y", "X")
    assert out == "Equal\n"


def test_ks_svg(capsys):
    code, out = run(capsys, "ks", "--n", "4", "--out", "svg")
    assert code == 0 and out.startswith("<svg") and out.count("<circle") == 4


def test_ks_writes_a_file(capsys, tmp_path):
    target = tmp_path / "ks.json"
    code, out = run(capsys, "ks", "--n", "3", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["counts"] == {"vertices": 3, "edges": 3}


def test_trop_line(capsys):
    code, out = run(capsys, "trop", "--poly", "x + y + t", "--clip", "[-4,1]^2")
    data = json.loads(out)
    assert code == 0
    assert data["tropicalization"] == "X v Y v -1"
    assert data["vertices"] == [["-1", "-1"]]


def test_dualcx(capsys):
    code, out = run(capsys, "dualcx", "--n", "3", "--mult", "2,1")
    assert code == 0 and json.loads(out)["schema"] == "skeleta/1"


def test_cover_check(capsys):
    code, out = run(capsys, "cover-check", "0", "2", "[[[0,1],[1,2]]]")
    assert code == 0 and json.loads(out)["covers"] is False


def test_exit_codes(capsys, tmp_path, bxy_file):
    bad = tmp_path / "bad.sk"
    bad.write_text("semiring over B; gens X; rel X =;")
    code, out = run(capsys, "spec", str(bad))
    assert code == 2 and json.loads(out)["error"] == "ParseError"
    code, out = run(capsys, "ks", "--n", "2")
    assert code == 1 and json.loads(out)["error"] == "TooSmall"
    code, _ = run(capsys, "ks")
    assert code == 2
    code, _ = run(capsys, "eq", bxy_file, "X + 1", "X")
    assert code == 1


def test_output_is_deterministic(capsys, simplex_file):
    first = run(capsys, "spec", simplex_file)
    assert run(capsys, "spec", simplex_file) == first
    assert run(capsys, "trop", "--poly", "x + y + t", "--clip", "[-4,1]^2", "--format", "svg") == \
        run(capsys, "trop", "--poly", "x + y + t", "--clip", "[-4,1]^2", "--format", "svg")


def test_accept_single_case(capsys):
    code, out = run(capsys, "accept", "--case", "1", "--case", "7")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 2 and all(l.startswith("[PASS]") for l in lines)
