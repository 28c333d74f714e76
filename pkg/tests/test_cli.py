import io
import json
from fractions import Fraction

import pytest

from lpptour import cli, percolation, recurrence, series
from lpptour.numerics import QPowers
from lpptour.recurrence import WeightDistribution


def run(*argv):
    out = io.StringIO()
    code = cli.run(list(argv), out)
    return code, out.getvalue()


def _clear_caches():
    recurrence.clear_cache()
    percolation._enumerate_counts.cache_clear()
    series._signed_exponent_counts.cache_clear()


@pytest.fixture(autouse=True)
def fresh_caches():
    _clear_caches()
    yield
    _clear_caches()


def test_exact_table():
    assert run("exact", "--n", "5", "--p", "1/2", "--format", "table") == (0, "2399/1024\n")


def test_exact_json():
    code, text = run("exact", "--n", "8", "--p", "1/2", "--format", "json")
    assert code == 0
    assert json.loads(text)["expected_weight"] == "1119481727/268435456"


def test_beta_digits():
    code, text = run("beta", "--p", "1/2", "--tol", "1e-15")
    assert code == 0 and text.startswith("0.60914971106")


def test_oracle_small():
    assert run("oracle", "--n", "2", "--p", "1/3") == (0, "2/3, 1/3\n")


def test_dist_json_round_trip():
    code, text = run("dist", "--n", "6", "--p", "1/3", "--format", "json")
    assert code == 0
    d = WeightDistribution.from_dict(json.loads(text))
    d.check(Fraction(1, 3))
    assert d == recurrence.distribution(6, Fraction(1, 3))


def test_dist_csv_has_header_and_one_row_per_weight():
    code, text = run("dist", "--n", "4", "--p", "1/2", "--format", "csv")
    lines = text.strip().split("\n")
    assert code == 0 and lines[0] == "weight,probability" and len(lines) == 1 + 4


def test_pgf_and_moments():
    code, text = run("pgf", "--n", "3", "--p", "1/2", "--format", "json")
    assert code == 0 and json.loads(text)["coeffs"] == ["1/8", "5/8", "1/4"]
    code, text = run("moments", "--n-max", "3", "--p", "1/2", "--format", "json")
    assert json.loads(text)["rows"][3]["m1"] == "9/8"
    code, text = run("moments", "--n-max", "80", "--p", "1/2", "--format", "csv")
    assert code == 0 and len(text.strip().split("\n")) == 82


def test_series_kinds():
    code, text = run("series", "--kind", "H", "--order", "2", "--p", "1/2")
    assert (code, text) == (0, "1, -1/2, 1/8\n")
    code, text = run("series", "--kind", "Z", "--order", "3", "--p", "1/2", "--format", "json")
    assert json.loads(text)["coeffs"][3] == ["1/8", "5/8", "1/4"]
    code, text = run("series", "--kind", "G", "--order", "3", "--p", "1/2", "--format", "json")
    assert series.TruncatedSeries.from_json(text)[3] == Fraction(17, 8)


def test_compositions_command():
    code, text = run("compositions", "--n", "3", "--p", "1/2", "--format", "json", "--list")
    d = json.loads(text)
    assert code == 0 and d["g"] == "17/8" and len(d["compositions"]) == 4
    code, _ = run("compositions", "--n", "30", "--p", "1/2")
    assert code == 2


def test_sigma_and_varslope():
    code, text = run("sigma", "--p", "1/2", "--formula", "derived", "--format", "json")
    assert code == 0 and float(json.loads(text)["value"]) ** 2 == pytest.approx(0.12399, rel=1e-4)
    code, text = run("varslope", "--n", "3", "--p", "1/2")
    assert float(text) == pytest.approx(23 / 128)
    code, text = run("varslope", "--n", "100", "--p", "1/2", "--compare", "--format", "json")
    assert set(json.loads(text)) >= {"theorem", "lemma", "derived", "variance_slope"}


def test_simulate_reports_seed_and_writes_csv(tmp_path, capsys):
    path = tmp_path / "x.csv"
    code, text = run("simulate", "--n", "20", "--p", "1/2", "--count", "50", "--csv", str(path))
    assert code == 0
    seed_line = capsys.readouterr().err.strip()
    assert seed_line.startswith("seed: ")
    seed = seed_line.split()[1]
    rows = path.read_text().strip().split("\n")
    assert rows[0] == "sample,x" and len(rows) == 51
    # replaying the printed seed reproduces the run
    _, again = run("simulate", "--n", "20", "--p", "1/2", "--count", "50", "--seed", seed)
    assert again == text


def test_simulate_json_carries_seed():
    code, text = run("simulate", "--n", "10", "--p", "1/3", "--count", "20", "--seed", "5", "--format", "json")
    assert code == 0 and json.loads(text)["seed"] == 5


def test_clt_command():
    code, text = run("clt", "--n", "50", "--p", "1/2", "--count", "200", "--seed", "1", "--format", "json", "--windows")
    d = json.loads(text)
    assert code == 0 and d["sample_count"] == 200 and d["window_correlation"] is not None


def test_env_workers_override(monkeypatch):
    monkeypatch.setenv("LPPTOUR_WORKERS", "3")
    _, text = run("simulate", "--n", "10", "--p", "1/2", "--count", "30", "--seed", "2", "--format", "json")
    assert json.loads(text)["worker_count"] == 3


def test_env_tol_override(monkeypatch):
    monkeypatch.setenv("LPPTOUR_TOL", "1e-6")
    _, loose = run("beta", "--p", "1/2", "--format", "json")
    monkeypatch.delenv("LPPTOUR_TOL")
    _, tight = run("beta", "--p", "1/2", "--format", "json")
    assert float(json.loads(loose)["error_bound"]) > float(json.loads(tight)["error_bound"])


@pytest.mark.parametrize(
    "argv",
    [
        ["exact", "--n", "5", "--p", "3/2"],
        ["exact", "--n", "5", "--p", "half"],
        ["exact", "--n", "5", "--p", "1/2", "--bogus"],
        ["nosuch"],
        [],
        ["beta", "--p", "0"],
        ["oracle", "--n", "9", "--p", "1/2"],
        ["series", "--kind", "Q", "--order", "3", "--p", "1/2"],
    ],
)
def test_usage_errors_exit_2_with_one_line(argv, capsys):
    code, _ = run(*argv)
    err = capsys.readouterr().err
    assert code == 2
    assert err.count("\n") == 1 and err.startswith("lpptour: error:")


def test_verify_passes():
    code, text = run("verify", "--n-max", "6")
    assert code == 0
    assert text.strip().endswith("checks passed")


def test_verify_json():
    code, text = run("verify", "--n-max", "4", "--p", "1/3", "--format", "json")
    d = json.loads(text)
    assert code == 0 and d["failed"] == [] and d["checks"] > 0


def _bump(original, at):
    def mutated(self, k):
        v = original(self, k)
        return v + Fraction(1, 1024) if k == at else v

    return mutated


@pytest.mark.parametrize(
    "method,at",
    [("transition", 2), ("transition", 5), ("shifted", 3), ("triangular", 4), ("shifted", 1)],
)
def test_verify_detects_single_coefficient_mutation(monkeypatch, method, at):
    monkeypatch.setattr(QPowers, method, _bump(getattr(QPowers, method), at))
    _clear_caches()
    code, text = run("verify", "--n-max", "6")
    assert code == 1
    assert "FAIL" in text


def test_verify_detects_mutated_composition_count(monkeypatch):
    original = series._signed_exponent_counts.__wrapped__

    def mutated(n):
        counts = original(n)
        return counts if n != 4 else counts[:-1] + ((counts[-1][0], counts[-1][1] + 1),)

    monkeypatch.setattr(series, "_signed_exponent_counts", mutated)
    code, _ = run("verify", "--n-max", "6")
    assert code == 1


def test_module_entry_point():
    import subprocess
    import sys

    r = subprocess.run([sys.executable, "-m", "lpptour", "exact", "--n", "3", "--p", "1/2"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout == "9/8\n"
