from __future__ import annotations

import json

import pytest

from hilbert_padic.cli import main
from hilbert_padic.hecke import ValPoint


def run(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr()
    return rc, out.out, out.err


def test_hecke_step_from_file(tmp_path, capsys):
    f = tmp_path / "pt.json"
    f.write_text(json.dumps({"f": 2, "nu": ["0", "1"], "flag": "supergeneral"}))
    rc, out, _ = run(capsys, "hecke", "step", "--json", str(f))
    data = json.loads(out)
    assert rc == 0 and data["size"] == 9
    img = data["images"][0]
    assert img["mult"] == 9
    assert ValPoint.from_json(img["point"]) == ValPoint.single((1, "2/3"))


def test_hecke_region(capsys):
    rc, out, _ = run(capsys, "hecke", "region", "--json", "--nu", "1,1")
    assert rc == 0 and json.loads(out)["region"] == "canonical"


def test_hecke_square(tmp_path, capsys):
    f = tmp_path / "sq.svg"
    rc, _, _ = run(capsys, "hecke", "square", "--nu", "0,1", "--flag", "superspecial", "--w", "1,1",
                   "--depth", "1", "--svg", str(f))
    assert rc == 0 and f.read_text().startswith("<svg")
    assert 'class="loop"' in f.read_text()


def test_missing_file_exits_2(capsys):
    rc, _, err = run(capsys, "hecke", "step", "/nonexistent/pt.json")
    assert rc == 2 and "error" in err


def test_undetermined_exits_2(capsys):
    rc, _, err = run(capsys, "hecke", "step", "--nu", "1/2,1/20")
    assert rc == 2 and "UndeterminedDynamics" in err


def test_bk_round_trip(tmp_path, capsys):
    rc, out, _ = run(capsys, "bk", "generate", "--p", "3", "--e", "3", "--ew", "1,2", "--seed", "4")
    assert rc == 0
    f = tmp_path / "m.json"
    f.write_text(out)
    rc, out, _ = run(capsys, "bk", "canonical", "--json", "--module", str(f))
    data = json.loads(out)
    assert rc == 0 and data["c_degrees"] == ["2/3", "1/3"]


def test_bk_generate_needs_valuations(capsys):
    rc, _, err = run(capsys, "bk", "generate", "--p", "3", "--e", "3")
    assert rc == 2 and "valuations" in err


def test_newton(capsys):
    rc, out, _ = run(capsys, "bk", "newton", "--json", "--points", "0:2,1:0,10:0")
    assert rc == 0 and json.loads(out)["roots"] == [["2/1", 1], ["0/1", 9]]


def test_dieudonne_count(capsys):
    rc, out, _ = run(capsys, "dieudonne", "enumerate", "--json", "--kind", "supersingular-a1", "--p", "3")
    assert rc == 0 and json.loads(out)["count"] == 10


def test_continuation_check(tmp_path, capsys):
    cfg = {"p": 3, "primes": [{"f": 2, "k": [5, 5], "v": "0", "eps": "7/8"}]}
    f = tmp_path / "s.json"
    f.write_text(json.dumps(cfg))
    rc, _, _ = run(capsys, "continuation", "check", "--config", str(f))
    assert rc == 0
    cfg["primes"][0]["v"] = "3"
    f.write_text(json.dumps(cfg))
    rc, _, _ = run(capsys, "continuation", "check", "--config", str(f))
    assert rc == 1


def test_epsilon(capsys):
    rc, out, _ = run(capsys, "continuation", "epsilon", "--json", "--kind", "deg1", "--p", "3")
    assert rc == 0 and json.loads(out)["limit"] == "3/8"


def test_windows_verify(capsys):
    rc, out, _ = run(capsys, "windows", "verify", "--json", "--p", "2", "--g", "2")
    assert rc == 0 and json.loads(out)["all_pass"] is True


def test_fixtures_run(capsys):
    rc, out, _ = run(capsys, "fixtures", "run")
    assert rc == 0


def test_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["hecke"])
    assert exc.value.code == 2
