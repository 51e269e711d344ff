import csv
import json
import math

import numpy as np
import pytest

from weakmeas.cli import main
from weakmeas.config import ScenarioConfig
from weakmeas.errors import ConfigError


def run(tmp_path, *argv, name="out.txt"):
    out = tmp_path / name
    code = main([*argv, "--out", str(out)])
    return code, out


def read_rows(path):
    lines = [ln for ln in path.read_text().splitlines() if not ln.startswith("#")]
    reader = csv.DictReader(lines)
    return [{k: float(v) for k, v in row.items()} for row in reader]


def footer(path):
    return dict(ln[2:].split("=", 1) for ln in path.read_text().splitlines() if ln.startswith("# "))


def test_figure1_loci(tmp_path):
    code, out = run(tmp_path, "figure1", "--delta", "0.5")
    assert code == 0
    rows = read_rows(out)
    assert len(rows) == 201
    ax = math.exp(0.5) / 2
    for r in rows:
        assert abs(r["sx_f"] ** 2 + r["sz_f"] ** 2 - 0.25) < 1e-9
        assert abs((r["sx_m"] / ax) ** 2 + (r["sz_m"] / 0.5) ** 2 - 1) < 1e-9
    center = rows[100]
    assert center["outcome"] == 0.0
    assert center["sx_m"] == pytest.approx(ax, abs=1e-12)
    assert center["sx_f"] == pytest.approx(0.5, abs=1e-12)


def test_figure1_wide_ellipse(tmp_path):
    _, out = run(tmp_path, "figure1", "--delta", "10", "--outcomes", "11")
    rows = read_rows(out)
    assert len(rows) == 11
    assert max(r["sx_m"] for r in rows) == pytest.approx(math.exp(1 / 800) / 2, rel=1e-12)


def test_output_is_deterministic(tmp_path):
    _, a = run(tmp_path, "figure1", name="a.csv")
    _, b = run(tmp_path, "figure1", name="b.csv")
    assert a.read_bytes() == b.read_bytes()
    assert b"\r\n" not in a.read_bytes()


@pytest.mark.parametrize("delta,modes", [(0.3, 2), (0.8, 1)])
def test_distribution_modality(tmp_path, delta, modes):
    code, out = run(tmp_path, "distribution", "--delta", str(delta))
    assert code == 0
    meta = footer(out)
    assert int(meta["local_maxima"]) == modes
    assert float(meta["integral"]) == pytest.approx(1.0, abs=1e-8)
    rows = read_rows(out)
    assert len(rows) == 4001


def test_distribution_outcome_count(tmp_path):
    _, out = run(tmp_path, "distribution", "--outcomes", "101")
    assert len(read_rows(out)) == 101


def test_negativity_center(tmp_path):
    code, out = run(tmp_path, "negativity", "--delta", "0.5")
    assert code == 0
    rows = read_rows(out)
    assert len(rows) == 201
    center = min(rows, key=lambda r: abs(r["outcome"]))
    assert center["outcome"] == pytest.approx(0.0, abs=1e-15)
    assert center["purity_rho_m"] == pytest.approx((1 + math.e) / 2, abs=1e-10)
    assert center["min_eig_rho_m"] == pytest.approx((1 - math.exp(0.5)) / 2, abs=1e-10)


def test_negativity_vanishes_at_eigenvalues(tmp_path):
    cfg = tmp_path / "scan.cfg"
    cfg.write_text("delta = 0.1\ngrid.lo = -1.3\ngrid.hi = 1.3\ngrid.n = 27\n")
    _, out = run(tmp_path, "negativity", "--config", str(cfg))
    rows = read_rows(out)
    assert len(rows) == 27
    for target in (-0.5, 0.5):
        r = min(rows, key=lambda r: abs(r["outcome"] - target))
        assert r["outcome"] == pytest.approx(target, abs=1e-12)
        assert r["total_negativity"] < 1e-6


def test_negativity_diagonal_state(tmp_path):
    _, out = run(tmp_path, "negativity", "--state", "mixed", "--outcomes", "21")
    assert all(r["total_negativity"] < 1e-12 for r in read_rows(out))


def test_correlate_json(tmp_path):
    code, out = run(tmp_path, "correlate")
    assert code == 0
    report = json.loads(out.read_text())
    assert report["analytic"] == pytest.approx(-math.exp(-0.5) / 8, abs=1e-12)
    assert report["numeric"] == pytest.approx(report["analytic"], abs=1e-7)
    assert report["flagged"] is False
    assert report["B"] == "spin-x"


def test_correlate_random(tmp_path):
    code, out = run(tmp_path, "correlate", "--dim", "4", "--observable", "random", "--state", "random",
                    "--b", "random", "--seed", "3")
    assert code == 0
    assert json.loads(out.read_text())["discrepancy"] < 1e-7


@pytest.mark.parametrize("argv", [[], ["--dim", "5", "--observable", "random", "--state", "random", "--seed", "42"]])
def test_verify_passes(tmp_path, argv):
    code, out = run(tmp_path, "verify", *argv)
    lines = out.read_text().splitlines()
    assert code == 0, out.read_text()
    assert lines[-1].startswith("PASS")
    assert all(ln.startswith("PASS") for ln in lines)


def test_non_hermitian_config(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("dim = 2\nobservable.matrix = 0,0, 1,0, 0,0, 0,0\n")
    out = tmp_path / "never.csv"
    for command in ("figure1", "distribution", "verify"):
        assert main([command, "--config", str(cfg), "--out", str(out)]) == 2
        assert not out.exists()
    assert "not Hermitian" in capsys.readouterr().err


def test_bad_delta(tmp_path):
    code, out = run(tmp_path, "distribution", "--delta", "-1")
    assert code == 2
    assert not out.exists()


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "s.cfg"
    cfg.write_text("# comment\ndelta = 0.3\nstate = plus-z\noutcomes = 5\n")
    parsed = ScenarioConfig.from_file(cfg)
    assert parsed.delta == 0.3 and parsed.state == "plus-z" and parsed.outcomes == 5
    assert parsed.override(delta=0.9, state=None).delta == 0.9
    assert parsed.override(delta=0.9, state=None).state == "plus-z"
    _, out = run(tmp_path, "figure1", "--config", str(cfg), "--delta", "0.6")
    assert len(read_rows(out)) == 5


def test_unknown_key(tmp_path):
    cfg = tmp_path / "s.cfg"
    cfg.write_text("deltaa = 0.3\n")
    with pytest.raises(ConfigError):
        ScenarioConfig.from_file(cfg)


def test_explicit_matrices():
    cfg = ScenarioConfig.from_mapping({
        "dim": "2",
        "observable.matrix": "1,0, 0,0, 0,0, -1,0",
        "state.vector": "1,0, 0,1",
    }).validate()
    np.testing.assert_allclose(cfg.model.eigenvalues, [-1, 1])
    assert cfg.rho.purity() == pytest.approx(1.0)
