import csv
import io
import json
import math
import subprocess
import sys

import pytest

from usptrace import cli
from usptrace.distribution import F_TAU_G2_AT_0


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def table(text):
    rows = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(rows))))


def test_density_csv(capsys):
    code, out, _ = run(["density", "--which", "tau", "--g", "2", "--n", "5"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("# usptrace ") and "density" in lines[0]
    assert "--n=5" in lines[1] and "--seed=0" in lines[1]
    rows = table(out)
    assert [r["x"] for r in rows] == ["-4", "-2", "0", "2", "4"]
    assert float(rows[2]["f"]) == pytest.approx(F_TAU_G2_AT_0, abs=1e-15)


def test_density_json_uses_decimal_strings(capsys):
    code, out, _ = run(["density", "--which", "rho", "--n", "3", "--format", "json"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["header"]["subcommand"] == "density"
    assert all(isinstance(v["f"], str) for v in doc["values"])
    assert float(doc["values"][1]["f"]) == pytest.approx(8 / (3 * math.pi**2), abs=1e-15)


def test_output_is_reproducible(tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        assert cli.main(["sample", "--g", "3", "--n", "500", "--seed", "9", "--out", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_sample_columns(capsys):
    code, out, _ = run(["sample", "--g", "2", "--n", "4", "--seed", "1"], capsys)
    rows = table(out)
    assert list(rows[0]) == ["theta1", "theta2", "t1", "t2", "trace"]
    for r in rows:
        assert float(r["t1"]) + float(r["t2"]) == pytest.approx(float(r["trace"]), abs=1e-15)


def test_moments(capsys):
    code, out, _ = run(["moments", "--which", "chi2", "--count", "7", "--format", "json"], capsys)
    assert json.loads(out)["values"] == [1, 0, 1, 0, 3, 1, 15]
    code, out, _ = run(["moments", "--which", "tau", "--g", "3", "--count", "11"], capsys)
    assert [r["M"] for r in table(out)][::2] == ["1", "1", "3", "15", "104", "909"]


def test_cdf_and_charfn(capsys):
    _, out, _ = run(["cdf", "--which", "tau", "--n", "3"], capsys)
    assert [float(r["F"]) for r in table(out)] == [0.0, 0.5, 1.0]
    _, out, _ = run(["charfn", "--which", "tau_g2", "--tmin", "0", "--tmax", "1", "--n", "2"], capsys)
    assert float(table(out)[0]["phi"]) == 1.0


def test_alcove(capsys):
    _, out, _ = run(["alcove", "--g", "3", "--s", "6,12,8", "--format", "json"], capsys)
    assert json.loads(out)["values"]["in_sigma"] is True
    _, out, _ = run(["alcove", "--g", "2", "--s", "0,1"], capsys)
    assert table(out)[0] == {"in_pi": "false", "in_theta": "true", "in_sigma": "false"}


def test_weil_validate(capsys):
    _, out, _ = run(["weil-validate", "--a", "1,5,1", "--format", "json"], capsys)
    assert json.loads(out)["values"]["valid"] is False
    _, out, _ = run(["weil-validate", "--p", "3", "--f", "1:0:0:0:0:1", "--format", "json"], capsys)
    vals = json.loads(out)["values"]
    assert vals["N1"] == 4 and vals["valid"] is True


def test_curves_csv_and_summary(tmp_path, capsys):
    summary = tmp_path / "s.json"
    code, out, _ = run(["curves", "--p", "3", "--summary", str(summary)], capsys)
    assert code == 0
    rows = table(out)
    assert len(rows) == 1296 and rows[0]["p"] == "3"
    doc = json.loads(summary.read_text())
    assert doc["values"]["n_curves"] == 1296 and float(doc["values"]["mean_N1"]) == pytest.approx(4.0)


@pytest.mark.parametrize(
    "argv",
    [
        ["density", "--which", "rho", "--g", "3"],
        ["density", "--which", "tau", "--g", "4"],
        ["density", "--which", "chi2", "--method", "elliptic"],
        ["alcove", "--g", "3", "--s", "1,2"],
        ["weil-validate"],
        ["curves", "--p", "11", "--mode", "sample"],
        ["bogus"],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(argv)
    assert info.value.code == 2


@pytest.mark.parametrize("argv", [["curves", "--p", "31"], ["curves", "--p", "4"], ["density", "--xmin", "2", "--xmax", "1"]])
def test_domain_errors_exit_2(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2 and err.startswith("usptrace:")


def test_corrupt_count_exits_4(capsys):
    code, out, err = run(["curves", "--p", "5", "--inject-corrupt-count"], capsys)
    assert code == 4 and "validate_weil" in err


def test_accuracy_failure_exits_3(capsys, monkeypatch):
    from usptrace import distribution
    from usptrace.errors import AccuracyError

    def broken(*args, **kwargs):
        raise AccuracyError("budget exhausted", best=0.5, est_error=1e-3)

    monkeypatch.setattr(distribution, "charfn", broken)
    code, _, err = run(["charfn", "--n", "2"], capsys)
    assert code == 3 and "0.5" in err


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "usptrace", "moments", "--which", "tau", "--count", "5"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.splitlines()[-1] == "4,3"
    out = subprocess.run([sys.executable, "-m", "usptrace", "--version"], capture_output=True, text=True)
    assert out.stdout.startswith("usptrace ")
