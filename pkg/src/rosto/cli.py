"""
Command-line front end. Every subcommand writes data files (CSV or JSON) to
the output directory and prints their paths.

Output directory precedence: --out, then $ROSTO_OUT_DIR, then the config
file's "out", then the working directory. Numeric settings: flags, then the
config file, then the defaults below.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import characteristics as ch
from . import evolution as ev
from . import spectral as sp
from . import verify as vf
from . import wave as wv
from .periodic import PeriodicGrid, write_profile_csv

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

SUBCOMMANDS = ("wave", "characteristics", "evolve", "spectrum", "figure", "verify")
SPECTRUM_SUMMARY_KEYS = ("n_modes", "lambda1", "band_low", "band_high", "transcendental_root", "count_below")


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    m: int = 4096
    N: int = 256
    c: float = wv.C_STAR
    a: float = 20.0
    t_final: float = 30.0
    dt: float = 1e-3
    C: float = 0.25
    out: str = "."
    seed: int = 0
    kind: str = "peaked"
    mode: str = "full"
    figure: str = "root-function"

    def __post_init__(self) -> None:
        if self.subcommand not in SUBCOMMANDS:
            raise ValueError(f"unknown subcommand {self.subcommand!r}")
        for name in ("m", "N", "c", "a", "t_final", "dt", "C"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.m % 2 or self.m < 4:
            raise ValueError("m must be an even integer >= 4")
        if self.N < 8:
            raise ValueError("N must be at least 8")
        if self.dt > 0.01:
            raise ValueError("dt must not exceed 0.01")
        if self.C >= 0.5:
            raise ValueError("C must lie in (0, 1/2)")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.kind not in ("peaked", "smooth"):
            raise ValueError("kind is peaked or smooth")
        if self.mode not in ("full", "truncated"):
            raise ValueError("mode is full or truncated")
        if self.figure not in ("phase-plane", "root-function"):
            raise ValueError("figure is phase-plane or root-function")

    @property
    def out_dir(self) -> Path:
        return Path(self.out)


# flag name -> (RunConfig field, type)
_OPTIONS = {
    "m": ("m", int),
    "modes": ("N", int),
    "c": ("c", float),
    "a": ("a", float),
    "t-final": ("t_final", float),
    "dt": ("dt", float),
    "C": ("C", float),
    "out": ("out", str),
    "seed": ("seed", int),
    "kind": ("kind", str),
    "mode": ("mode", str),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="flat JSON file whose keys mirror the flag names")
    for flag, (_, typ) in _OPTIONS.items():
        if flag in ("kind", "mode"):
            continue
        common.add_argument(f"--{flag}", type=typ, default=None, dest=flag.replace("-", "_"))

    parser = _Parser(prog="rosto", description="Peaked periodic wave numerics")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)
    p = sub.add_parser("wave", parents=[common], help="peaked or smooth travelling wave profile")
    p.add_argument("--kind", choices=("peaked", "smooth"), default=None)
    sub.add_parser("characteristics", parents=[common], help="characteristic positions and Jacobians")
    p = sub.add_parser("evolve", parents=[common], help="linearized evolution of example data")
    p.add_argument("--mode", choices=("full", "truncated"), default=None)
    sub.add_parser("spectrum", parents=[common], help="Galerkin spectrum of the Hessian operator")
    p = sub.add_parser("figure", parents=[common], help="data behind the phase plane or root-function plots")
    p.add_argument("figure", choices=("phase-plane", "root-function"))
    sub.add_parser("verify", parents=[common], help="run every check and print a report")
    return parser


def _read_config(path: str) -> dict:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError:
        raise
    except json.JSONDecodeError as exc:
        raise UsageError(f"config file is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise UsageError("config file must hold a flat JSON object")
    out = {}
    for key, value in raw.items():
        flag = key.replace("_", "-") if key != "t_final" else "t-final"
        if flag not in _OPTIONS:
            raise UsageError(f"unknown config key {key!r}")
        field_name, typ = _OPTIONS[flag]
        if isinstance(value, (dict, list)) or (typ is int and isinstance(value, float) and not value.is_integer()):
            raise UsageError(f"config key {key!r} has the wrong type")
        try:
            out[field_name] = typ(value)
        except (TypeError, ValueError) as exc:
            raise UsageError(f"config key {key!r} has the wrong type") from exc
    return out


def parse_args(argv: list[str] | None = None, env: dict | None = None) -> RunConfig:
    """Merge defaults, config file and flags into a RunConfig.

    Raises UsageError on malformed input; OSError if the config file cannot
    be read.
    """
    env = os.environ if env is None else env
    parser = _build_parser()
    ns = parser.parse_args(argv)
    values: dict = {}
    if ns.config:
        values.update(_read_config(ns.config))
    for flag, (field_name, _) in _OPTIONS.items():
        v = getattr(ns, flag.replace("-", "_"), None)
        if v is not None and flag != "out":
            values[field_name] = v
    if ns.out is not None:
        values["out"] = ns.out
    elif env.get("ROSTO_OUT_DIR"):
        values["out"] = env["ROSTO_OUT_DIR"]
    if ns.subcommand == "figure":
        values["figure"] = ns.figure
    try:
        return RunConfig(subcommand=ns.subcommand, **values)
    except ValueError as exc:
        parser.error(str(exc))


# ---------------------------------------------------------------- writers


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    return f"{float(x):.17g}"


def write_csv(path: Path, header, rows) -> Path:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(x) for x in row])
    return path


def write_json(path: Path, payload: dict) -> Path:
    # repr of a float is its shortest exact round-trip form
    path.write_text(json.dumps(payload, indent=2, sort_keys=True, allow_nan=False) + "\n")
    return path


def _finite_or_none(x):
    return None if x is None or not math.isfinite(x) else float(x)


# ---------------------------------------------------------------- commands


def cmd_wave(cfg: RunConfig) -> list[Path]:
    grid = PeriodicGrid(cfg.m)
    if cfg.kind == "peaked":
        profile, params = wv.peaked_profile(grid), wv.peaked_params()
    else:
        profile, params = wv.smooth_wave_solve(cfg.c, grid)
    csv_path = cfg.out_dir / f"wave_{cfg.kind}.csv"
    write_profile_csv(profile, csv_path)
    js = write_json(cfg.out_dir / f"wave_{cfg.kind}.json", {"c": params.c, "e_level": params.e_level, "m": cfg.m})
    return [csv_path, js]


def cmd_characteristics(cfg: RunConfig) -> list[Path]:
    s = np.linspace(-math.pi, math.pi, 65)
    t = np.linspace(0.0, cfg.t_final, 61)
    rows = ch.characteristic_table(s, t)
    return [write_csv(cfg.out_dir / "characteristics.csv", ("s", "t", "Z", "dZds"), rows)]


def cmd_evolve(cfg: RunConfig) -> list[Path]:
    v0 = ev.example_v0(cfg.a, PeriodicGrid(cfg.m))
    run = ev.evolve(v0, cfg.t_final, cfg.dt, cfg.mode, C=cfg.C)
    norms = write_csv(cfg.out_dir / f"evolve_{cfg.mode}_norms.csv", ev.NORMS_HEADER, run.rows())
    summary = run.summary()
    summary["C_used"] = _finite_or_none(summary["C_used"])
    js = write_json(cfg.out_dir / f"evolve_{cfg.mode}_summary.json", summary)
    return [norms, js]


def cmd_spectrum(cfg: RunConfig) -> list[Path]:
    res = sp.eigen_solve(sp.build_matrix(cfg.N))
    eig = write_csv(cfg.out_dir / "eigenvalues.csv", ("index", "eigenvalue"),
                    ((str(i), x) for i, x in enumerate(res.eigenvalues)))
    summary = {
        "n_modes": cfg.N,
        "lambda1": res.lambda1,
        "band_low": res.band[0],
        "band_high": res.band[1],
        "transcendental_root": res.transcendental_root,
        "count_below": res.count_below(-1e-3),
    }
    return [eig, write_json(cfg.out_dir / "spectrum_summary.json", summary)]


def cmd_figure(cfg: RunConfig) -> list[Path]:
    if cfg.figure == "root-function":
        return [write_csv(cfg.out_dir / "root_function.csv", ("lambda", "value", "branch"), sp.root_function_table())]
    levels = np.linspace(0.0, cfg.c**3 / 6, 9)
    rows = wv.phase_plane_data(cfg.c, levels)
    return [write_csv(cfg.out_dir / "phase_plane.csv", ("E", "U", "Uprime", "branch"), rows)]


def cmd_verify(cfg: RunConfig) -> tuple[list[Path], bool]:
    checks = vf.run_all(cfg.seed, log=print)
    n_pass = sum(c.passed for c in checks)
    print(f"{n_pass}/{len(checks)} checks passed")
    for group in vf.GROUPS:
        sel = [c for c in checks if c.group == group]
        print(f"  {group:<18} {sum(c.passed for c in sel)}/{len(sel)}")
    report = {"checks": [dataclasses.asdict(c) for c in checks], "passed": n_pass, "total": len(checks)}
    for c in report["checks"]:
        c["value"] = _finite_or_none(c["value"])
    path = write_json(cfg.out_dir / "verify_report.json", report)
    return [path], n_pass == len(checks)


def run(cfg: RunConfig) -> int:
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    ok = True
    if cfg.subcommand == "verify":
        paths, ok = cmd_verify(cfg)
    else:
        handler = {
            "wave": cmd_wave,
            "characteristics": cmd_characteristics,
            "evolve": cmd_evolve,
            "spectrum": cmd_spectrum,
            "figure": cmd_figure,
        }[cfg.subcommand]
        paths = handler(cfg)
    for p in paths:
        print(p)
    return EXIT_OK if ok else EXIT_FAIL


def main(argv: list[str] | None = None) -> int:
    try:
        cfg = parse_args(argv)
    except UsageError as exc:
        print(f"rosto: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"rosto: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        return run(cfg)
    except OSError as exc:
        print(f"rosto: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"rosto: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
