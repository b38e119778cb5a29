import csv
import json

import numpy as np
import pytest

from rosto import cli
from rosto import evolution as ev
from rosto.periodic import PeriodicGrid, write_profile_csv
from rosto.wave import peaked_profile


def test_defaults_and_flags():
    cfg = cli.parse_args(["spectrum", "--modes", "128"], env={})
    assert cfg.N == 128 and cfg.m == 4096 and cfg.a == 20 and cfg.dt == 1e-3 and cfg.C == 0.25
    cfg = cli.parse_args(["evolve", "--mode", "full", "--a", "20", "--t-final", "30"], env={})
    assert (cfg.mode, cfg.a, cfg.t_final, cfg.m) == ("full", 20.0, 30.0, 4096)


@pytest.mark.parametrize(
    "argv",
    [
        ["evolve", "--dt", "-1"],
        ["evolve", "--dt", "0.5"],
        ["evolve", "--bogus", "1"],
        ["wave", "--m", "1023"],
        ["spectrum", "--modes", "4"],
        ["wave", "--kind", "cusped"],
        ["figure", "nothing"],
        ["dance"],
        [],
    ],
)
def test_usage_errors(argv, capsys):
    assert cli.main(argv) == cli.EXIT_USAGE
    assert "usage" in capsys.readouterr().err


def test_config_precedence(tmp_path):
    conf = tmp_path / "c.json"
    conf.write_text(json.dumps({"m": 512, "t_final": 2.0, "dt": 0.005, "out": "from-config"}))
    cfg = cli.parse_args(["evolve", "--config", str(conf), "--dt", "0.002"], env={})
    assert (cfg.m, cfg.t_final, cfg.dt, cfg.out) == (512, 2.0, 0.002, "from-config")
    cfg = cli.parse_args(["evolve", "--config", str(conf)], env={"ROSTO_OUT_DIR": "from-env"})
    assert cfg.out == "from-env"
    cfg = cli.parse_args(["evolve", "--config", str(conf), "--out", "flag"], env={"ROSTO_OUT_DIR": "from-env"})
    assert cfg.out == "flag"


def test_bad_config(tmp_path):
    conf = tmp_path / "c.json"
    conf.write_text(json.dumps({"grid": 12}))
    assert cli.main(["wave", "--config", str(conf)]) == cli.EXIT_USAGE
    conf.write_text("{not json")
    assert cli.main(["wave", "--config", str(conf)]) == cli.EXIT_USAGE
    conf.write_text(json.dumps({"m": 12.5}))
    assert cli.main(["wave", "--config", str(conf)]) == cli.EXIT_USAGE
    assert cli.main(["wave", "--config", str(tmp_path / "missing.json")]) == cli.EXIT_IO


def test_io_error(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert cli.main(["wave", "--m", "64", "--out", str(blocker / "sub")]) == cli.EXIT_IO


def test_wave_peaked_matches_serialization(tmp_path):
    assert cli.main(["wave", "--kind", "peaked", "--m", "256", "--out", str(tmp_path)]) == 0
    write_profile_csv(peaked_profile(PeriodicGrid(256)), tmp_path / "ref.csv")
    assert (tmp_path / "wave_peaked.csv").read_bytes() == (tmp_path / "ref.csv").read_bytes()


def test_wave_smooth(tmp_path):
    assert cli.main(["wave", "--kind", "smooth", "--c", "1.05", "--m", "256", "--out", str(tmp_path)]) == 0
    meta = json.loads((tmp_path / "wave_smooth.json").read_text())
    assert meta["c"] == 1.05 and 0 < meta["e_level"] < 1.05**3 / 6
    assert cli.main(["wave", "--kind", "smooth", "--c", "1.5", "--m", "256", "--out", str(tmp_path)]) == cli.EXIT_USAGE


def test_root_function_figure(tmp_path):
    assert cli.main(["figure", "root-function", "--out", str(tmp_path)]) == 0
    with (tmp_path / "root_function.csv").open() as fh:
        rows = list(csv.DictReader(fh))
    assert list(rows[0]) == ["lambda", "value", "branch"]
    neg = np.array([float(r["value"]) for r in rows if float(r["lambda"]) < 0])
    assert np.count_nonzero(np.diff(np.sign(neg))) == 1
    lam = [float(r["lambda"]) for r in rows]
    assert min(lam) == -3.0 and max(lam) == 5.0


def test_phase_plane_figure(tmp_path):
    assert cli.main(["figure", "phase-plane", "--out", str(tmp_path)]) == 0
    header = (tmp_path / "phase_plane.csv").read_text().splitlines()[0]
    assert header == "E,U,Uprime,branch"


def test_characteristics_csv(tmp_path):
    assert cli.main(["characteristics", "--t-final", "6", "--out", str(tmp_path)]) == 0
    with (tmp_path / "characteristics.csv").open() as fh:
        rows = list(csv.DictReader(fh))
    assert list(rows[0]) == ["s", "t", "Z", "dZds"]
    hit = [r for r in rows if float(r["s"]) == 0.0 and float(r["t"]) == 6.0]
    assert float(hit[0]["Z"]) == pytest.approx(-3.12988, abs=1e-5)


def test_spectrum_outputs(tmp_path):
    assert cli.main(["spectrum", "--modes", "64", "--out", str(tmp_path)]) == 0
    summary = json.loads((tmp_path / "spectrum_summary.json").read_text())
    assert tuple(sorted(summary)) == tuple(sorted(cli.SPECTRUM_SUMMARY_KEYS))
    assert summary["count_below"] == 1
    lines = (tmp_path / "eigenvalues.csv").read_text().splitlines()
    assert lines[0] == "index,eigenvalue" and len(lines) == 129


def test_evolve_outputs_and_determinism(tmp_path):
    args = ["evolve", "--mode", "truncated", "--m", "512", "--t-final", "3", "--dt", "0.01"]
    a, b = tmp_path / "a", tmp_path / "b"
    assert cli.main(args + ["--out", str(a)]) == 0
    assert cli.main(args + ["--out", str(b)]) == 0
    for name in ("evolve_truncated_norms.csv", "evolve_truncated_summary.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
    summary = json.loads((a / "evolve_truncated_summary.json").read_text())
    assert set(summary) == set(ev.SUMMARY_KEYS)
    assert summary["C_used"] is None and summary["passed_lower"] is False
    header = (a / "evolve_truncated_norms.csv").read_text().splitlines()[0]
    assert header == ",".join(ev.NORMS_HEADER)


def test_floats_round_trip(tmp_path):
    x = 0.1 + 0.2
    cli.write_csv(tmp_path / "x.csv", ("x",), [(x,)])
    assert float((tmp_path / "x.csv").read_text().splitlines()[1]) == x
    assert (tmp_path / "x.csv").read_text().splitlines()[1] == "0.30000000000000004"
