import itertools
import json
import subprocess
import sys

import pytest

from lrcavail.cli import main, parse_range
from lrcavail.lrc import LrcCode


@pytest.fixture
def run(capsys, monkeypatch):
    def _run(*argv, stdin=None):
        if stdin is not None:
            import io
            monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
        code = main([str(a) for a in argv])
        out, err = capsys.readouterr()
        return code, out, err
    return _run


@pytest.fixture
def bundles(tmp_path, run):
    kt2 = tmp_path / "kirkman_t2.json"
    assert run("design", "kirkman15", "--t", 2, "-o", kt2)[0] == 0
    a3 = tmp_path / "affine3.json"
    assert run("design", "affine", "--q", 3, "--t", 2, "-o", a3)[0] == 0
    a2 = tmp_path / "affine2.json"
    assert run("design", "affine", "--q", 2, "--t", 2, "-o", a2)[0] == 0
    out = {}
    for name, args in {"code30": ("c1", "--R", kt2, "--N", 20),
                       "code17": ("c1", "--R", a3, "--N", 11),
                       "code11": ("c2", "--R", a2, "--N", 6)}.items():
        path = tmp_path / f"{name}.json"
        code, _, err = run("construct", *args, "-o", path)
        assert code == 0, err
        out[name] = path
    ex = tmp_path / "ex1.json"
    assert run("construct", "example1", "-o", ex)[0] == 0
    out["ex1"] = ex
    return out


def test_design_kirkman_check(run):
    code, out, err = run("design", "kirkman15", "--check")
    assert code == 0
    d = json.loads(out)
    assert d["b"] == 35 and len(d["classes"]) == 7
    assert "blocks=35" in err and "conformant" in err


def test_design_zigzag_check(run):
    code, out, err = run("design", "zigzag", "--r", 2, "--t", 2, "--check")
    assert code == 0 and json.loads(out)["k"] == 8


def test_design_affine_default_poly(run):
    code, out, _ = run("design", "affine", "--q", 4)
    assert code == 0 and json.loads(out)["k"] == 16


def test_design_bad_params(run):
    assert run("design", "affine", "--q", 6)[0] == 2
    assert run("design", "zigzag", "--r", 2)[0] == 2


def test_construct_prints_parameters(tmp_path, run):
    kt2 = tmp_path / "k.json"
    run("design", "kirkman15", "--t", 2, "-o", kt2)
    code, _, err = run("construct", "c1", "--R", kt2, "--N", 20, "-o", tmp_path / "c.json")
    assert code == 0 and "(n,k,r,t)=(30,15,3,2)" in err and "bound_thm1=8" in err
    assert LrcCode.from_json(json.loads((tmp_path / "c.json").read_text())).n == 30


def test_construct_rejections(tmp_path, run):
    z = tmp_path / "z.json"
    run("design", "zigzag", "--r", 2, "--t", 2, "-o", z)
    code, _, err = run("construct", "c2", "--R", z, "--N", 6, "--r", 2, "--t", 2, "--k", 4)
    assert code == 2 and "k=8" in err
    kt2 = tmp_path / "k.json"
    run("design", "kirkman15", "--t", 2, "-o", kt2)
    code, _, err = run("construct", "c1", "--R", kt2, "--N", 20, "--r", 4)
    assert code == 2 and "divide" in err


def test_encode_decode_roundtrip_no_erasures(bundles, tmp_path, run):
    msg = tmp_path / "msg.txt"
    msg.write_text("1 2 3 4 5 6 7 8 9\n0 0 0 0 0 0 0 0 1\n")
    cw = tmp_path / "cw.txt"
    assert run("encode", "--code", bundles["code17"], "--in", msg, "-o", cw)[0] == 0
    back = tmp_path / "back.txt"
    assert run("decode", "--code", bundles["code17"], "--in", cw, "-o", back)[0] == 0
    assert back.read_text() == msg.read_text()


def test_pipeline_with_corrupt(bundles, run):
    _, cw, _ = run("encode", "--code", bundles["code30"], stdin="1 2 3 4 5 6 7 8 9 10 11 12 13 14 15\n")
    _, bad, _ = run("corrupt", "--erase", "1,2,3,4,5,6,7", stdin=cw)
    assert bad.split()[:7] == ["?"] * 7
    code, out, err = run("decode", "--code", bundles["code30"], stdin=bad)
    assert code == 0 and out.split() == [str(i) for i in range(1, 16)]
    assert "within_guarantee=true" in err


def test_code17_every_four_erasures(bundles, tmp_path, run):
    msg = "3 1 4 1 5 9 2 6 5"
    _, cw, _ = run("encode", "--code", bundles["code17"], stdin=msg)
    sym = cw.split()
    lines = []
    for E in itertools.combinations(range(17), 4):
        lines.append(" ".join("?" if i in E else s for i, s in enumerate(sym)))
    f = tmp_path / "rx.txt"
    f.write_text("\n".join(lines))
    code, out, _ = run("decode", "--code", bundles["code17"], "--in", f)
    assert code == 0
    outs = out.splitlines()
    assert len(outs) == 2380 and set(outs) == {msg}


def test_decode_unrecoverable_exit1(bundles, run):
    _, cw, _ = run("encode", "--code", bundles["code17"], stdin="1 1 1 1 1 1 1 1 1")
    code, _, err = run("decode", "--code", bundles["code17"], "--erase", "1,2,3,4,5,6,7,8,9", stdin=cw)
    assert code == 1 and "rank" in err


def test_repair(bundles, run):
    _, cw, _ = run("encode", "--code", bundles["ex1"], stdin="1 0 1")
    _, bad, _ = run("corrupt", "--erase", "1", stdin=cw)
    code, out, _ = run("repair", "--code", bundles["ex1"], "--symbol", 1, "--group", 2, stdin=bad)
    assert code == 0 and out.startswith("symbol 1 = 1") and "2 5" in out
    _, bad2, _ = run("corrupt", "--erase", "1,2", stdin=cw)
    code, _, err = run("repair", "--code", bundles["ex1"], "--symbol", 1, "--group", 2, stdin=bad2)
    assert code == 1 and "group unavailable" in err


def test_analyze_example1(bundles, run):
    code, out, _ = run("analyze", "--code", bundles["ex1"], "--bounds", "--dmin", "--format", "json")
    assert code == 0
    d = json.loads(out)
    assert d["bounds"]["thm1"] == 4 and d["bounds"]["thm2"] == 4
    assert d["dmin"]["d_min"] == 3 and d["dmin"]["optimal_thm1"] is False


def test_analyze_subcode_codebook_file(tmp_path, run):
    C = [[a, b, c, a, a ^ b, b ^ c, a ^ c] for a in range(2) for b in range(2) for c in range(2)]
    f = tmp_path / "cb.json"
    f.write_text(json.dumps({"q": 2, "r": 2, "t": 2, "codewords": C, "groups": [
        {"symbol": 1, "repair": [[4], [2, 5]]},
        {"symbol": 2, "repair": [[1, 5], [3, 6]]},
        {"symbol": 3, "repair": [[2, 6], [1, 7]]}]}))
    code, out, _ = run("analyze", "--codebook", f, "--subcode", "--format", "json")
    assert code == 0
    tr = json.loads(out)["subcode"]
    assert tr["ell"] == 1 and tr["bound"] == 3 and sorted(tr["fixed"]) == [1, 2, 4, 5]


def test_analyze_asymptotics_csv(run):
    code, out, _ = run("analyze", "--asymptotics", "--family", "zigzag", "--t", 2, "--r", "2..4", "--format", "csv")
    assert code == 0
    rows = out.strip().splitlines()
    assert len(rows) == 4 and rows[1].split(",")[9] == "1/3"


def test_analyze_budget_exit3(bundles, run):
    code, out, err = run("analyze", "--code", bundles["code30"], "--dmin", "--budget", 20000, "--seed", 5)
    assert code == 3 and "d_min=8" in out and "not exhaustive" in err


def test_analyze_is_deterministic(bundles, run):
    a = run("analyze", "--code", bundles["code17"], "--dmin", "--budget", 300, "--seed", 2, "--format", "json")
    b = run("analyze", "--code", bundles["code17"], "--dmin", "--budget", 300, "--seed", 2, "--format", "json")
    assert a == b


def test_verify(bundles, run):
    code, out, _ = run("verify", "--code", bundles["code11"], "--mds", "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["all_symbol"] and d["mds"]["mds"]


def test_usage_errors(run, bundles):
    assert run("analyze", "--code", bundles["ex1"], "--codebook", "x", "--subcode")[0] == 2
    assert run("analyze", "--code", bundles["ex1"], "--dmin", "--budget", 0)[0] == 2
    assert run("bogus")[0] == 2
    assert run("encode", "--code", bundles["ex1"], stdin="1 2")[0] == 2


def test_bundle_reload_matches(bundles):
    for p in bundles.values():
        d = json.loads(p.read_text())
        assert LrcCode.from_json(d).to_json() == d


def test_parse_range():
    assert parse_range("2..4") == [2, 3, 4]
    assert parse_range("2,5") == [2, 5]


def test_module_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "lrcavail", "analyze", "--bounds",
                          "--n", "7", "--k", "3", "--r", "2", "--t", "2"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and "thm1=4" in res.stdout
