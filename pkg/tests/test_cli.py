import json
from pathlib import Path

import pytest

from finring.cli import main
from finring.errors import ElementNotInRing, RingSpecSyntaxError, UndefinedName
from finring.fixtures import fixture
from finring.ringspec import parse_ringspec

SPECS = Path(__file__).resolve().parent.parent / "ringspecs"


def test_diagonal_document():
    doc = parse_ringspec("ring R = zmod 4\nring S = product R R\next E = extension S gens()\n")
    E = doc.extension("E")
    assert E.S.order == 16 and E.R.order == 4
    assert doc.order == [("ring", "R"), ("ring", "S"), ("ext", "E")]


def test_transcription_matches_fixture_tables():
    doc = parse_ringspec((SPECS / "ramdec.ring").read_text())
    E, F = doc.extension("E"), fixture("FX-RAMDEC").ext
    assert E.S.same_tables(F.S)
    assert list(E.sub) == list(F.sub)


def test_missing_constructor_column():
    with pytest.raises(RingSpecSyntaxError) as info:
        parse_ringspec("ring R =")
    assert (info.value.line, info.value.column) == (1, 9)


def test_unknown_constructor_column():
    with pytest.raises(RingSpecSyntaxError) as info:
        parse_ringspec("# header\nring R = zring 4")
    assert (info.value.line, info.value.column) == (2, 10)


def test_undefined_names():
    with pytest.raises(UndefinedName):
        parse_ringspec("ring S = product R R")
    with pytest.raises(UndefinedName):
        parse_ringspec("ring R = zmod 4\next E = extension R gens(w)")


def test_tuple_outside_product():
    with pytest.raises(ElementNotInRing):
        parse_ringspec("ring R = zmod 4\next E = extension R gens((1, 2))")
    with pytest.raises(ElementNotInRing):
        parse_ringspec("ring R = zmod 4\nring S = product R R\next E = extension S gens((1, 2, 3))")


def test_duplicate_name():
    with pytest.raises(RingSpecSyntaxError):
        parse_ringspec("ring R = zmod 4\nring R = zmod 2")


def test_quot_and_gf_and_elements():
    doc = parse_ringspec(
        "ring K = gf 2 2\n"
        "ring D = polyquot K [z] (z^2)\n"
        "ring Q = quot D (z)\n"
        "ring P = product D D\n"
        "ext E = extension P gens((z, 0) + (x, x)^2)\n")
    assert doc.rings["D"].order == 16 and doc.rings["Q"].order == 4
    assert doc.extension("E").R.order > 4


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_analyze_fixture_json(capsys):
    code, out, _ = run_cli(["analyze", str(SPECS / "ramdec.ring"), "--ext", "E"], capsys)
    assert code == 0
    report = json.loads(out)
    assert list(report) == ["conductor_size", "support", "predicates", "tower", "lattice", "minimal_steps"]
    p = report["predicates"]
    assert (p["seminormal"], p["infraintegral"], p["unramified"]) == (False, True, True)
    assert [s["type"] for s in report["minimal_steps"]] == ["Ramified", "Decomposed"]


def test_analyze_bell_count(capsys):
    code, out, _ = run_cli(["analyze", str(SPECS / "diag.ring"), "--ext", "E"], capsys)
    assert json.loads(out)["lattice"]["count"] == 5


def test_analyze_improper_has_null_minimal(tmp_path, capsys):
    spec = tmp_path / "r.ring"
    spec.write_text("ring R = zmod 4\next E = extension R gens(1)\n")
    code, out, _ = run_cli(["analyze", str(spec), "--ext", "E"], capsys)
    report = json.loads(out)
    assert code == 0 and report["predicates"]["minimal"] is None and report["minimal_steps"] == []


def test_analyze_writes_files_and_suite(tmp_path, capsys):
    js, dot = tmp_path / "r.json", tmp_path / "r.dot"
    code, out, _ = run_cli(["analyze", str(SPECS / "ramdec.ring"), "--ext", "E", "--json", str(js),
                            "--dot", str(dot), "--suite", "T-MIN,T-CANMIN"], capsys)
    assert code == 0 and out == ""
    report = json.loads(js.read_text())
    assert [r["check"] for r in report["suite"]] == ["T-MIN", "T-CANMIN"]
    assert dot.read_text().startswith("digraph lattice {")


def test_failing_check_sets_exit_code(tmp_path, capsys):
    spec = tmp_path / "d.ring"
    spec.write_text("ring K = zmod 2\nring D = polyquot K [z] (z^2)\next E = extension D gens()\n")
    code, out, _ = run_cli(["analyze", str(spec), "--ext", "E", "--suite", "T-SN-ETALE-EQUIV"], capsys)
    assert code == 1
    assert json.loads(out)["suite"][0]["verdict"] == "fail"


def test_parse_error_exit_code(tmp_path, capsys):
    spec = tmp_path / "bad.ring"
    spec.write_text("ring R =\n")
    code, _, err = run_cli(["analyze", str(spec), "--ext", "E"], capsys)
    assert code == 2
    assert json.loads(err)["error"] == "PARSE_ERROR"


def test_usage_error_exit_code(capsys):
    code, _, _ = run_cli(["analyze"], capsys)
    assert code == 2


def test_carrier_flag_beats_environment(tmp_path, capsys, monkeypatch):
    spec = tmp_path / "big.ring"
    spec.write_text("ring R = zmod 4\nring S = product R R R\next E = extension S gens()\n")
    monkeypatch.setenv("FINRING_MAX_CARRIER", "16")
    code, _, err = run_cli(["analyze", str(spec), "--ext", "E"], capsys)
    assert code == 2 and json.loads(err)["error"] == "CAP_EXCEEDED"
    code, _, _ = run_cli(["analyze", str(spec), "--ext", "E", "--max-carrier", "64"], capsys)
    assert code == 0


def test_suite_verb(capsys):
    code, out, _ = run_cli(["suite", "--fixtures", "FX-RAM,FX-F2F4", "--checks", "T-MIN,T-NOUN"], capsys)
    report = json.loads(out)
    assert code == 0 and report["counts"]["fail"] == 0
    assert len(report["results"]) == 4


def test_output_is_byte_stable(tmp_path, capsys):
    outs = []
    for k in range(2):
        js, dot = tmp_path / f"{k}.json", tmp_path / f"{k}.dot"
        main(["analyze", str(SPECS / "ramdec.ring"), "--ext", "E", "--json", str(js), "--dot", str(dot),
              "--suite", "all", "--seed", "3", "--random", "5"])
        outs.append((js.read_bytes(), dot.read_bytes()))
    assert outs[0] == outs[1]
