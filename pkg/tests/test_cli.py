import csv
import json
import math

import pytest

from so3mes.cli import CSV_COLUMNS, fmt, main, parse_time


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


FIG1 = ["trace", "--theta", "0.62832", "--b", "1.3603", "--omega", "1", "--mode", "dual",
        "--t-max", "pi/omega"]


def read_csv(path):
    lines = path.read_text().splitlines()
    data = [l for l in lines if not l.startswith("#")]
    summary = dict(l[2:].split("=", 1) for l in lines if l.startswith("#"))
    return list(csv.reader(data)), summary


def test_fmt():
    assert fmt(math.pi) == "3.14159265359"
    assert fmt(-0.0) == "0"
    assert fmt(1.0) == "1"


@pytest.mark.parametrize("text,expected", [("pi/omega", math.pi / 2), ("2pi/omega", math.pi),
                                           ("0.5*pi/omega", math.pi / 4), ("1.25", 1.25)])
def test_parse_time(text, expected):
    assert parse_time(text, 2.0) == pytest.approx(expected)


def test_trace_fig1_csv(tmp_path, capsys):
    out = tmp_path / "fig1.csv"
    code, stdout, _ = run(FIG1 + ["--out", str(out)], capsys)
    assert code == 0
    rows, summary = read_csv(out)
    assert tuple(rows[0]) == CSV_COLUMNS
    assert len(rows) == 4096 + 2
    assert summary == {"breaks": "3", "closure_phase": "-1", "parity_ok": "true"}
    assert sum(int(r[-1]) for r in rows[1:]) == 3
    assert {r[9] for r in rows[1:]} == {"1", "-1"}
    manifest = json.loads((tmp_path / "fig1.csv.manifest.json").read_text())
    assert manifest["command"] == "trace"
    assert manifest["steps"]["n_steps"] == 4096
    assert "breaks=3" in stdout


def test_trace_fig2_ratio(tmp_path, capsys):
    out = tmp_path / "fig2.csv"
    code, _, _ = run(["trace", "--theta", "0.62832", "--ratio", "1.5", "--mode", "dual",
                      "--t-max", "pi/omega", "--out", str(out)], capsys)
    assert code == 0
    _, summary = read_csv(out)
    assert summary["closure_phase"] == "+1"
    assert int(summary["breaks"]) % 2 == 0


def test_trace_zero_time(capsys):
    code, stdout, _ = run(["trace", "--theta", "0.6", "--b", "1", "--t-max", "0"], capsys)
    assert code == 0
    lines = stdout.splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert sum(1 for l in lines[1:] if not l.startswith("#")) == 1
    assert "# breaks=0" in lines


def test_trace_json(tmp_path, capsys):
    out = tmp_path / "t.json"
    code, _, _ = run(FIG1 + ["--steps", "512", "--format", "json", "--out", str(out)], capsys)
    assert code == 0
    doc = json.loads(out.read_text())
    assert set(doc) == {"manifest", "samples", "summary"}
    assert set(doc["summary"]) == {"breaks", "closure_phase", "parity_ok"}
    assert doc["summary"]["closure_phase"] == "-1"
    assert doc["summary"]["parity_ok"] is True
    assert set(doc["samples"][0]) == set(CSV_COLUMNS)
    assert len(doc["samples"]) == 513


@pytest.mark.parametrize("fmt_", ["csv", "json"])
def test_trace_byte_identical(tmp_path, capsys, fmt_):
    a, b = tmp_path / "a", tmp_path / "b"
    for p in (a, b):
        assert run(FIG1 + ["--steps", "300", "--format", fmt_, "--out", str(p)], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert b"\r" not in a.read_bytes()


def test_trace_usage_errors(capsys):
    assert run(["trace", "--theta", "0.6"], capsys)[0] == 1
    assert run(["trace", "--theta", "0.6", "--b", "1", "--ratio", "1"], capsys)[0] == 1
    assert run(["trace", "--theta", "0.6", "--b", "1", "--t-max", "soon"], capsys)[0] == 1
    assert run(["trace", "--theta", "0.6", "--b", "1", "--steps", "10"], capsys)[0] == 1
    assert run(["trace", "--theta", "0.6", "--b", "1", "--omega", "-1"], capsys)[0] == 1
    assert run(["trace", "--nope"], capsys)[0] == 1


def test_trace_numerical_errors(capsys):
    code, _, err = run(["trace", "--theta", "1.0", "--ratio", "0.1"], capsys)
    assert code == 2 and "NoSolutionError" in err
    code, _, err = run(["trace", "--theta", "0.62832", "--ratio", "60", "--steps", "100"], capsys)
    assert code == 2 and "InsufficientResolutionError" in err


@pytest.mark.parametrize("ratio,expected", [("1", 1.36035), ("1.5", 1.87544)])
def test_solve_b(ratio, expected, capsys):
    code, out, _ = run(["solve-b", "--theta", "0.62832", "--ratio", ratio], capsys)
    assert code == 0
    vals = dict(l.split("=") for l in out.splitlines())
    assert float(vals["b"]) == pytest.approx(expected, abs=1e-5)
    assert float(vals["omega0_over_omega"]) == pytest.approx(float(ratio), abs=1e-9)
    assert len(vals["b"].replace(".", "")) <= 12


def test_solve_b_closed_form(capsys):
    _, out, _ = run(["solve-b", "--ratio", "0.5", "--theta", "1.0"], capsys)
    assert out.splitlines()[0] == f"b={fmt(math.cos(1.0))}"
    assert run(["solve-b", "--ratio", "0.1", "--theta", "1.0"], capsys)[0] == 2


def test_verify_quick_deterministic(capsys):
    code1, out1, _ = run(["verify", "--seed", "42", "--quick"], capsys)
    code2, out2, _ = run(["verify", "--seed", "42", "--quick"], capsys)
    assert code1 == code2 == 0
    assert out1 == out2
    assert out1.count("PASS") == 9


def test_verify_full_verdicts_match_quick(capsys):
    _, quick, _ = run(["verify", "--seed", "42", "--quick"], capsys)
    code, full, _ = run(["verify", "--seed", "42"], capsys)
    assert code == 0

    def verdicts(text):
        return [l.split()[:2] for l in text.splitlines() if l.startswith(("PASS", "FAIL"))]

    assert verdicts(quick) == verdicts(full)


def test_verify_fault_injection_fails_loudly(capsys):
    code, out, err = run(["verify", "--quick", "--inject-fault"], capsys)
    assert code == 2
    assert "FAIL" in out and "failed:" in err


def test_optics_mapping(capsys):
    code, out, _ = run(["optics", "--theta", str(math.pi / 5), "--ratio", "1", "--t", "pi/omega",
                        "--lambda", "1", "--kerr-k", "1", "--d", "1"], capsys)
    assert code == 0
    vals = {k: float(v) for k, v in (l.split("=") for l in out.splitlines())}
    assert vals["phi1"] == pytest.approx(2 * math.pi)
    assert vals["phi2"] == pytest.approx(math.pi)
    assert vals["e1"] == pytest.approx(1.0)
    assert vals["e2"] == pytest.approx(math.sqrt(0.5))


def test_optics_zero_time_fields(capsys):
    code, out, _ = run(["optics", "--theta", "0.6", "--b", "1", "--t", "0", "--lambda", "1"], capsys)
    assert code == 0
    assert "e1=0" in out.splitlines() and "e2=0" in out.splitlines()


def test_optics_scan(tmp_path, capsys):
    out = tmp_path / "scan.csv"
    code, _, _ = run(["optics", "--scan", "--ratio-min", "0", "--ratio-max", "3",
                      "--scan-steps", "7", "--out", str(out)], capsys)
    assert code == 0
    rows = list(csv.reader(out.read_text().splitlines()))
    assert rows[0] == ["ratio", "intensity"]
    table = {float(r): float(i) for r, i in rows[1:]}
    for n in (0, 1, 2, 3):
        assert table[n] < 1e-6
    for n in (0.5, 1.5, 2.5):
        assert table[n] > 1 - 1e-6


def test_optics_usage_and_domain_errors(capsys):
    assert run(["optics", "--theta", "0.6", "--b", "1"], capsys)[0] == 1
    assert run(["optics", "--theta", "0.0", "--b", "0.5", "--t", "1"], capsys)[0] == 2
