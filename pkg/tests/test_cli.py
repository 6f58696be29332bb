import json

import numpy as np
import pytest

from gerstenwerk import cli
from gerstenwerk import extensions
from gerstenwerk.algebra import truncated_polynomial
from gerstenwerk.cache import CacheError, ResolutionCache
from gerstenwerk.errors import ValidationError
from gerstenwerk.lifting import GerstenhaberEngine
from gerstenwerk.report import REPORT_SCHEMA


def run(argv):
    with pytest.raises(SystemExit) as exit_:
        cli.main(argv)
    return exit_.value.code


def test_ext_report(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert run(["ext", "--algebra", "corpus/A2.json", "--max-degree", "4", "--report", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["schema"] == REPORT_SCHEMA and rep["passed"]
    assert [r["cohomology"] for r in rep["sections"][0]["rows"]] == [2, 1, 1, 1, 1]
    assert "PASSED" in capsys.readouterr().out


def test_bracket_reports_are_byte_identical(tmp_path):
    a, b, c = tmp_path / "a.json", tmp_path / "b.json", tmp_path / "c.json"
    base = ["bracket", "--algebra", "corpus/A3.json", "--max-degree", "5"]
    assert run(base + ["--report", str(a)]) == 0
    assert run(base + ["--report", str(b), "--cache", str(tmp_path / "cache")]) == 0
    assert run(base + ["--report", str(c), "--cache", str(tmp_path / "cache")]) == 0
    assert a.read_bytes() == b.read_bytes() == c.read_bytes()
    rep = json.loads(a.read_text())
    assert all(s["sign"] == 1 for s in rep["sections"])


def test_explicit_pairs_and_truncation():
    assert run(["bracket", "--algebra", "corpus/A1.json", "--max-degree", "4", "--pairs", "1,2"]) == 0
    assert run(["bracket", "--algebra", "corpus/A1.json", "--max-degree", "4", "--pairs", "2,3"]) == 3
    assert run(["bracket", "--algebra", "corpus/A1.json", "--max-degree", "4", "--pairs", "x"]) == 2


def test_validation_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    m = np.zeros((3, 3, 3), dtype=int)
    for i in range(3):
        m[0, i, i] = m[i, 0, i] = 1
    m[1, 1, 2] = m[2, 1, 1] = 1
    bad.write_text(json.dumps({"schema": "gw-algebra/1", "characteristic": 2, "dimension": 3,
                               "basis": ["1", "x", "y"], "unit": [1, 0, 0], "mult": m.tolist()}))
    assert run(["ext", "--algebra", str(bad), "--max-degree", "2"]) == 2
    assert "(x*x)*x" in capsys.readouterr().err
    assert run(["ext", "--algebra", str(tmp_path / "missing.json"), "--max-degree", "2"]) == 2
    assert run(["verify", "--algebra", "corpus/A1.json", "--max-degree", "4", "--verify", "nope"]) == 2
    assert run(["verify", "--algebra", "corpus/A1.json", "--max-degree", "4", "--verify", "power-flat"]) == 2
    assert run(["cache", "--algebra", "corpus/A1.json", "--max-degree", "3"]) == 2
    assert run(["ext", "--algebra", "corpus/A1.json", "--max-degree", "0"]) == 2


def test_verify_passes_and_truncates():
    assert run(["verify", "--algebra", "corpus/A2.json", "--max-degree", "4"]) == 0
    assert run(["verify", "--algebra", "corpus/A2.json", "--max-degree", "2", "--verify", "diamond"]) == 3
    assert run(["verify", "--algebra", "corpus/A1.json", "--max-degree", "5", "--verify", "power-flat=2"]) == 0


def test_verification_failure_gives_exit_4(monkeypatch, tmp_path):
    def broken(f, g, H=None):
        rep = extensions.VerificationReport("broken")
        rep.add("always fails", False, {"why": "test"})
        return rep
    monkeypatch.setattr(extensions, "verify_schwede_hermann", broken)
    out = tmp_path / "r.json"
    code = run(["verify", "--algebra", "corpus/A1.json", "--max-degree", "3", "--verify", "schwede-hermann",
                "--report", str(out)])
    assert code == 4
    rep = json.loads(out.read_text())
    assert not rep["passed"] and rep["sections"][0]["checks"][0]["detail"] == {"why": "test"}


def test_cache_roundtrip_and_corruption(tmp_path):
    A = truncated_polynomial(3, 2)
    cache = ResolutionCache(tmp_path)
    bar = cache.resolution(A, 4)
    again = cache.resolution(A, 4)
    assert (cache.misses, cache.hits) == (1, 1)
    for i in range(4):
        assert np.array_equal(bar.complex.d(i).matrix, again.complex.d(i).matrix)
    eng = GerstenhaberEngine(bar)
    f = eng.cohomology.basis_cocycles(1)[0]
    eng.lifting(f)
    cache.store_liftings(eng)
    eng2 = GerstenhaberEngine(again)
    assert cache.load_liftings(eng2) == 1
    path = cache.resolution_path(A, 4)
    doc = json.loads(path.read_text())
    doc["payload"]["degrees"][1]["dim"] += 1
    path.write_text(json.dumps(doc))
    with pytest.raises(CacheError):
        cache.resolution(A, 4)
    assert issubclass(CacheError, ValidationError)


def test_cache_command(tmp_path):
    out = tmp_path / "r.json"
    assert run(["cache", "--algebra", "corpus/A1.json", "--max-degree", "4", "--cache", str(tmp_path / "c"),
                "--report", str(out)]) == 0
    names = sorted(p.name for p in (tmp_path / "c").iterdir())
    assert len(names) == 2 and names[0].endswith("-N4.chain.json") and names[1].endswith("-N4.lift.json")
    (tmp_path / "c" / names[1]).write_text("{not json")
    assert run(["bracket", "--algebra", "corpus/A1.json", "--max-degree", "4", "--cache", str(tmp_path / "c")]) == 2


def test_parse_helpers():
    assert cli.parse_pairs(["1,2 2,1", "3,3"]) == [(1, 2), (2, 1), (3, 3)]
    assert cli.parse_verify("diamond,power-flat=3") == {"diamond": None, "power-flat": 3}
    assert set(cli.parse_verify(None)) == set(cli.VERIFY_DEFAULT)
