import csv
import io
import json
import subprocess
import sys

import pytest

from radgauss.cli import main


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_constants_json(capsys):
    code, out, _ = run(["constants", "--format", "json"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert round(doc["c1"], 2) == 3.18 and round(doc["c2"], 2) == 3.22


def test_constants_csv(capsys):
    code, out, _ = run(["constants", "--format", "csv"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and {r["name"] for r in rows} >= {"c1", "c2", "c3"}


def test_tail_example_and_normalization_warning(capsys):
    code, out, err = run(["tail", "--weights", "1,1", "--x", "1.41421356237"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and float(rows[0]["tail"]) == 0.25
    assert "normalized" in err
    code, _, err = run(["tail", "--weights", "1,1", "--x", "1", "--no-normalize"], capsys)
    assert code == 1 and "norm" in err
    code, out, err = run(["tail", "--weights", "0.6,0.8", "--x", "0", "--no-normalize"], capsys)
    assert code == 0 and err == ""


def test_tail_equal_weights_and_mc(capsys):
    code, out, _ = run(["tail", "--equal-weights", "100", "--x", "0", "--format", "json"], capsys)
    assert code == 0 and json.loads(out)[0]["tail"] > 0.5
    code, out, _ = run(["tail", "--weights", "1", "--x", "0", "--samples", "1000", "--format", "json"], capsys)
    assert code == 0 and "std_error" in json.loads(out)[0]


def test_ratio_curve_figure_dataset(capsys):
    code, out, _ = run(["ratio-curve", "--equal-weights", "100"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 600
    assert list(rows[0]) == ["x", "tail", "gauss_tail", "ratio"]
    assert float(rows[0]["x"]) == 0.005 and float(rows[-1]["x"]) == 3.0


def test_bounds_table(capsys):
    code, out, _ = run(["bounds", "--grid-start", "-1", "--grid-stop", "2", "--grid-step", "0.5"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert [r["branch"] for r in rows] == ["one", "one", "one", "half", "half", "g", "h"]
    assert rows[0]["edelman"] == ""


def test_verify_region_exit_codes(capsys):
    code, out, _ = run(["verify-region", "--region", "A1"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["status"] == "certified" and doc["certified_sup"] == 0.0
    assert set(doc) >= {"region", "status", "certified_sup", "boxes_processed", "max_depth", "elapsed_ms"}
    code, out, _ = run(["verify-region", "--region", "GL1", "--max-boxes", "10"], capsys)
    assert code == 2 and json.loads(out)["status"] == "inconclusive"
    code, _, err = run(["verify-region", "--region", "XX"], capsys)
    assert code == 1 and "unknown region" in err
    code, _, _ = run(["verify-region", "--region", "A1", "--threshold", "-1"], capsys)
    assert code == 1


def test_usage_errors_exit_1(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify-region"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 1
    code, _, _ = run(["bounds", "--grid-step", "0"], capsys)
    assert code == 1
    code, _, _ = run(["tail", "--weights", "1,x"], capsys)
    assert code == 1


def test_verify_all_and_mixture(capsys):
    code, out, _ = run(["verify-all", "--no-timing"], capsys)
    docs = json.loads(out)
    assert code == 0 and len(docs) == 16 and all(d["status"] == "certified" for d in docs)
    code, out, _ = run(["verify-mixture", "--a-max", "0.9", "--x-max", "3"], capsys)
    assert code == 0


def test_induction_search_selfnorm(capsys):
    code, out, _ = run(["induction-check", "--n", "6", "--seed", "1", "--count", "3", "--no-timing"], capsys)
    docs = json.loads(out)
    assert code == 0 and len(docs) == 3
    code, out, _ = run(["search", "--n", "2", "--x", "1.4142135623730951"], capsys)
    doc = json.loads(out)
    assert code == 0 and abs(doc["ratio"] - doc["c1"]) < 1e-6
    code, out, _ = run(["selfnorm", "--family", "uniform", "--n", "10", "--x", "2", "--samples", "20000"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and rows[0]["within_bound"] == "True"
    code, _, _ = run(["selfnorm", "--family", "cauchy", "--n", "3", "--x", "1", "--samples", "10"], capsys)
    assert code == 1


def test_round_trip_and_idempotence(capsys, tmp_path):
    argv = ["ratio-curve", "--weights", "3,2,1", "--grid-start", "0.1", "--grid-stop", "2", "--grid-step", "0.1"]
    _, first, _ = run(argv, capsys)
    _, second, _ = run(argv, capsys)
    assert first == second
    rows = list(csv.DictReader(io.StringIO(first)))
    for r in rows:
        for k in ("tail", "gauss_tail", "ratio"):
            assert repr(float(r[k])) == r[k]
    path = tmp_path / "curve.json"
    run(argv + ["--format", "json", "--out", str(path)], capsys)
    doc = json.loads(path.read_text())
    assert [d["ratio"] for d in doc] == [float(r["ratio"]) for r in rows]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "radgauss", "verify-region", "--region", "A2", "--no-timing"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["status"] == "certified"
