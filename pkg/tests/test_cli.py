"""CLI end-to-end: reports, exit codes, determinism, tracing."""

from __future__ import annotations

import json

import pytest

from poiskit.cli import main
from poiskit.report import AnalysisOptions, InputError, analyze, parse_input

HEIS = {"coordinates": ["x", "y", "t"], "mode": "bivector",
        "bivector": [{"i": 0, "j": 1, "coeff": "t"}]}
SU2 = {"coordinates": ["x", "y", "z"], "mode": "bivector",
       "bivector": [{"i": 0, "j": 1, "coeff": "z"},
                    {"i": 1, "j": 2, "coeff": "x"},
                    {"i": 0, "j": 2, "coeff": "-y"}]}
SYMPLECTIC = {"coordinates": ["x", "y"], "mode": "bivector",
              "bivector": [{"i": 0, "j": 1, "coeff": "1"}]}
# zeros of the kernel drop ideal sit outside the witness search box
SHIFTED = {"coordinates": ["x", "y", "z"], "mode": "bivector",
           "bivector": [{"i": 0, "j": 1, "coeff": "z"},
                        {"i": 1, "j": 2, "coeff": "x - 7"},
                        {"i": 0, "j": 2, "coeff": "-y"}]}


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def test_analyze_heisenberg_report():
    report = analyze(HEIS)
    d = report.data
    assert d["jacobi"]["outcome"] == "yes"
    assert d["k"] == 1
    assert d["regular_locus_ideal"] == ["t"]
    assert d["almost_regular"]["outcome"] == "yes"
    assert d["almost_regular"]["distribution"]["generators"] == [["1", "0", "0"], ["0", "1", "0"]]
    assert d["log_f"]["verdict"] == "log-f-symplectic"
    assert d["log_f"]["g"] == "t"
    assert d["log_f"]["z_sing_ideal"] == ["t"]
    assert "t" in d["casimirs"]["basis"]
    assert not report.inconclusive


def test_analyze_rotation_report():
    report = analyze(SU2)
    d = report.data
    assert d["almost_regular"]["outcome"] == "no"
    assert d["almost_regular"]["witness"] == ["0", "0", "0"]
    assert d["germinal_isotropy"]["generators"] == [["x", "y", "z"]]
    assert "log_f" not in d


def test_analyze_symplectic_report():
    report = analyze(SYMPLECTIC)
    d = report.data
    assert d["k"] == 1
    assert d["log_f"]["verdict"] == "regular"
    assert d["casimirs"]["basis"] == ["1"]


def test_analyze_inconclusive_far_singularity():
    report = analyze(SHIFTED)
    assert report.inconclusive
    ar = report.data["almost_regular"]
    assert ar["outcome"] == "inconclusive"
    assert ar["unresolved_ideal"]  # the unresolved ideal is echoed verbatim


def test_jacobi_gate():
    bad = {"coordinates": ["x", "y", "z"], "mode": "bivector",
           "bivector": [{"i": 1, "j": 2, "coeff": "x"},
                        {"i": 0, "j": 2, "coeff": "-y"},
                        {"i": 0, "j": 1, "coeff": "x^2"}]}
    with pytest.raises(InputError):
        analyze(bad)
    report = analyze(bad, AnalysisOptions(skip_jacobi=True))
    assert report.data["jacobi"]["skipped"]


def test_lie_algebra_mode():
    doc = {"coordinates": ["x", "y", "z"], "mode": "lie_algebra",
           "structure_constants": [{"i": 0, "j": 1, "k": 2, "c": "1"}]}
    report = analyze(doc)
    assert report.data["lie_algebra"]["center_dimension"] == 1
    assert report.data["lie_algebra"]["h0_matches_center"]["outcome"] == "yes"
    assert report.data["almost_regular"]["outcome"] == "yes"


def test_lie_algebra_mode_dense_constants():
    dense = [[[0, 0, 0], [0, 0, 1], [0, 0, 0]],
             [[0, 0, -1], [0, 0, 0], [0, 0, 0]],
             [[0, 0, 0], [0, 0, 0], [0, 0, 0]]]
    doc = {"coordinates": ["x", "y", "z"], "mode": "lie_algebra",
           "structure_constants": dense}
    report = analyze(doc)
    assert report.data["lie_algebra"]["center_dimension"] == 1


def test_declared_distribution_is_checked():
    doc = dict(HEIS)
    doc["declared_distribution"] = [["1", "0", "0"], ["0", "1", "0"]]
    report = analyze(doc)
    declared = report.data["declared_distribution"]
    assert declared["equals_computed"] == "yes"
    assert report.data["distribution_checks"]["outcome"] == "yes"
    # a declared distribution that is not involutive is reported as failing
    doc["declared_distribution"] = [["1", "0", "0"], ["0", "1", "x"]]
    report2 = analyze(doc)
    assert report2.data["declared_distribution"]["equals_computed"] == "no"
    assert report2.data["distribution_checks"]["outcome"] == "no"


def test_input_errors():
    with pytest.raises(InputError):
        parse_input({"coordinates": ["x", "x"], "mode": "bivector", "bivector": []})
    with pytest.raises(InputError):
        parse_input({"coordinates": ["x", "y"], "mode": "bivector",
                     "bivector": [{"i": 1, "j": 0, "coeff": "1"}]})
    with pytest.raises(InputError):
        parse_input({"coordinates": ["x", "y"], "mode": "wat"})


def test_cli_exit_codes(tmp_path, capsys):
    heis = write(tmp_path, "heis.json", HEIS)
    assert main(["analyze", heis]) == 0
    capsys.readouterr()
    shifted = write(tmp_path, "shifted.json", SHIFTED)
    assert main(["analyze", shifted]) == 2
    capsys.readouterr()
    bad = write(tmp_path, "bad.json", {"coordinates": ["x"]})
    assert main(["analyze", bad]) == 1
    capsys.readouterr()


def test_cli_reports_are_byte_identical(tmp_path, capsys):
    heis = write(tmp_path, "heis.json", HEIS)
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["analyze", heis, "--json", str(out1)]) == 0
    first_text = capsys.readouterr().out
    assert main(["analyze", heis, "--json", str(out2)]) == 0
    second_text = capsys.readouterr().out
    assert out1.read_bytes() == out2.read_bytes()
    assert first_text == second_text


def test_cli_batch_mode(tmp_path, capsys):
    paths = [write(tmp_path, "a.json", HEIS), write(tmp_path, "b.json", SYMPLECTIC)]
    assert main(["analyze", *paths]) == 0
    out = capsys.readouterr().out
    assert out.index(paths[0]) < out.index(paths[1])


def test_cli_trace_csv(tmp_path, capsys):
    su2 = write(tmp_path, "su2.json", SU2)
    csv_path = tmp_path / "trace.csv"
    code = main(["analyze", su2, "--trace", "1,0,0", "--steps", "100",
                 "--dt", "0.001", "--trace-out", str(csv_path)])
    assert code == 0
    capsys.readouterr()
    lines = csv_path.read_text().strip().splitlines()
    assert lines[0] == "step,x,y,z"
    assert len(lines) == 102


def test_round_trip_parse_print_parse():
    from poiskit.polyalg import parse_polynomial

    structure, echo = parse_input(HEIS)
    again = parse_polynomial(("x", "y", "t"), echo["bivector"][0]["coeff"])
    assert again == structure.bivector.components[(0, 1)]
    assert str(structure.bivector) == echo["bivector_pretty"]
