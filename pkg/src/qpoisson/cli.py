"""Command-line front end.

Four subcommands: ``solve`` runs the full pipeline and reports the solution
next to the classical reference, ``pea-hist`` samples the phase register
right after phase estimation, ``alpha-sweep`` maps the post-selection
probability over rotation angles, and ``resources`` prints closed-form
resource counts without simulating.

JSON on stdout (or --output) is the authoritative result; --csv adds a
flat table of the same numbers. A JSON --config file supplies defaults and
explicit flags win. Exit codes: 0 success, 2 bad configuration, 3
post-selection failed, 4 over the qubit cap.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional

import numpy as np

from ._backend import backend_name
from .classical import PoissonProblem, default_alpha
from .errors import CapacityError, ConfigError, NoSuccessError
from .pipeline import (_grid_points, _resolve_sizes, grid_to_basis_index,
                       pea_histogram, resource_estimate, run_pipeline,
                       success_probability_curve)

_MODES = ("solve", "pea-hist", "alpha-sweep", "resources")


@dataclass
class RunConfig:
    """Fully resolved invocation, after merging flags and the config file."""

    command: str
    M: int
    d: int = 1
    rhs: Optional[str] = None
    alpha: Optional[float] = None
    n: Optional[int] = None
    shift: int = 0
    shots: Optional[int] = None
    seed: int = 0
    alphas: Optional[str] = None
    ideal_inversion: bool = False
    output: Optional[str] = None
    csv: Optional[str] = None
    qubit_cap: Optional[int] = None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qpoisson",
        description="Phase-estimation Poisson solver on a statevector simulator.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="mode")

    def common(p, needs_rhs):
        p.add_argument("--config", help="JSON file with defaults for any flag")
        p.add_argument("--M", type=int, help="grid intervals per axis (power of two)")
        p.add_argument("--d", type=int, help="spatial dimensions (default 1)")
        if needs_rhs:
            p.add_argument("--rhs", help="right-hand side: 'e1', inline "
                                         "'v1,v2,...', or @file")
            p.add_argument("--n", type=int, help="phase-register bits "
                                                 "(default fits the spectrum)")
            p.add_argument("--shift", type=int, help="resolution shift: drop "
                                                     "this many low register bits")
            p.add_argument("--seed", type=int, help="sampling seed (default 0)")
        p.add_argument("--output", help="write JSON here instead of stdout")
        p.add_argument("--csv", help="also write a CSV table here")

    p = sub.add_parser("solve", help="run the full pipeline")
    common(p, needs_rhs=True)
    p.add_argument("--alpha", type=float, help="rotation angle (default "
                                               "d * lambda_1 / 2)")
    p.add_argument("--shots", type=int, help="also sample ancilla and solution "
                                             "(default 0, exact only)")
    p.add_argument("--ideal-inversion", action="store_true", default=None,
                   help="replace the reciprocal stages with exact scaling")
    p.add_argument("--qubit-cap", type=int, help="override the qubit cap")

    p = sub.add_parser("pea-hist", help="sample the phase register after PEA")
    common(p, needs_rhs=True)
    p.add_argument("--shots", type=int, help="shot count (default 2000)")
    p.add_argument("--qubit-cap", type=int, help="override the qubit cap")

    p = sub.add_parser("alpha-sweep", help="success probability vs alpha")
    common(p, needs_rhs=True)
    p.add_argument("--alphas", help="comma-separated rotation angles")
    p.add_argument("--ideal-inversion", action="store_true", default=None,
                   help="sweep the ideal-scaling branch instead")
    p.add_argument("--qubit-cap", type=int, help="override the qubit cap")

    p = sub.add_parser("resources", help="closed-form resource counts")
    common(p, needs_rhs=False)
    return parser


def _merge_config_file(args: argparse.Namespace) -> dict:
    values = {k: v for k, v in vars(args).items() if k != "config"}
    path = getattr(args, "config", None)
    if not path:
        return values
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file is not valid JSON: {exc}")
    if not isinstance(raw, dict):
        raise ConfigError("config file must hold a JSON object")
    known = {f.name for f in fields(RunConfig)} - {"command"}
    for key, val in raw.items():
        name = key.replace("-", "_")
        if name not in known:
            raise ConfigError(f"unknown config key {key!r}")
        if name == "rhs" and isinstance(val, list):
            val = ",".join(repr(float(x)) for x in val)
        if name == "alphas" and isinstance(val, list):
            val = ",".join(repr(float(x)) for x in val)
        if values.get(name) is None:
            values[name] = val
    return values


def parse_config(argv) -> RunConfig:
    """Parse argv (list of strings) into a resolved RunConfig."""
    args = build_parser().parse_args(argv)
    values = _merge_config_file(args)
    allowed = {f.name for f in fields(RunConfig)}
    values = {k: v for k, v in values.items() if k in allowed}
    cfg = RunConfig(**values)
    if cfg.M is None:
        raise ConfigError("M is required (flag --M or config file)")
    for name in ("M", "d", "n", "shift", "shots", "seed", "qubit_cap"):
        val = getattr(cfg, name)
        if val is not None:
            try:
                setattr(cfg, name, int(val))
            except (TypeError, ValueError):
                raise ConfigError(f"{name} must be an integer, got {val!r}")
    if cfg.d is None:
        cfg.d = 1
    if cfg.shift is None:
        cfg.shift = 0
    if cfg.seed is None:
        cfg.seed = 0
    cfg.ideal_inversion = bool(cfg.ideal_inversion)
    if cfg.alpha is not None:
        try:
            cfg.alpha = float(cfg.alpha)
        except (TypeError, ValueError):
            raise ConfigError(f"alpha must be a number, got {cfg.alpha!r}")
    if cfg.command == "resources" and cfg.csv is not None:
        raise ConfigError("resources mode has no CSV table")
    return cfg


def _resolve_rhs(cfg: RunConfig) -> np.ndarray:
    size = (cfg.M - 1) ** cfg.d
    spec = cfg.rhs
    if spec is None:
        raise ConfigError("rhs is required (flag --rhs or config file)")
    spec = str(spec).strip()
    if spec == "e1":
        out = np.zeros(size)
        out[0] = 1.0
        return out
    if spec.startswith("@"):
        try:
            text = Path(spec[1:]).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read rhs file: {exc}")
        tokens = text.replace(",", " ").split()
    else:
        tokens = [t for t in spec.split(",") if t.strip()]
    try:
        values = np.array([float(t) for t in tokens])
    except ValueError:
        raise ConfigError(f"rhs entries must be numbers, got {spec!r}")
    if values.shape != (size,):
        raise ConfigError(
            f"rhs needs (M-1)^d = {size} entries, got {len(values)}")
    return values


def _build_problem(cfg: RunConfig, shots: int) -> PoissonProblem:
    rhs = _resolve_rhs(cfg)
    alpha = cfg.alpha if cfg.alpha is not None else default_alpha(cfg.M, cfg.d)
    try:
        return PoissonProblem(M=cfg.M, d=cfg.d, rhs=rhs, alpha=alpha,
                              n_b=cfg.n, shots=shots, seed=cfg.seed)
    except ValueError as exc:
        raise ConfigError(str(exc))


def _fmt(x) -> str:
    return f"{float(x):.12g}"


def _emit(cfg: RunConfig, payload: dict, csv_rows) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)
    if cfg.csv:
        lines = [",".join(header for header in csv_rows[0])]
        for row in csv_rows[1:]:
            lines.append(",".join(row))
        Path(cfg.csv).write_text("\n".join(lines) + "\n")


def run(cfg: RunConfig) -> int:
    """Execute a resolved config; returns the process exit code."""
    if cfg.command == "resources":
        try:
            est = resource_estimate(cfg.M, cfg.d)
        except ValueError as exc:
            raise ConfigError(str(exc))
        payload = {"config": {"M": cfg.M, "d": cfg.d}, "estimate": est}
        _emit(cfg, payload, None)
        return 0

    if cfg.command == "solve":
        problem = _build_problem(cfg, cfg.shots or 0)
        mode = "ideal-inversion" if cfg.ideal_inversion else "full"
        report = run_pipeline(problem, mode=mode, resolution_shift=cfg.shift,
                              cap=cfg.qubit_cap)
        for w in report.warnings:
            print(f"warning: {w}", file=sys.stderr)
        rows = [("grid_index", "amplitude", "reference")]
        for pos, point in enumerate(_grid_points(cfg.M, cfg.d)):
            rows.append((str(grid_to_basis_index(point, cfg.M, cfg.d)),
                         _fmt(report.solution[pos]),
                         _fmt(report.classical[pos])))
        _emit(cfg, report.to_dict(), rows)
        return 0

    if cfg.command == "pea-hist":
        shots = cfg.shots if cfg.shots is not None else 2000
        problem = _build_problem(cfg, shots)
        hist = pea_histogram(problem, shots=shots, resolution_shift=cfg.shift,
                             cap=cfg.qubit_cap)
        n_eff, n_reg = _resolve_sizes(problem, cfg.shift)
        payload = {
            "config": {"M": cfg.M, "d": cfg.d,
                       "rhs": [float(x) for x in problem.rhs],
                       "n": n_eff, "n_register": n_reg,
                       "shift": cfg.shift, "shots": shots,
                       "seed": cfg.seed, "backend": backend_name()},
            "histogram": {str(k): int(v) for k, v in sorted(hist.items())},
        }
        rows = [("value", "count")]
        rows += [(str(k), str(int(v))) for k, v in sorted(hist.items())]
        _emit(cfg, payload, rows)
        return 0

    if cfg.command == "alpha-sweep":
        if not cfg.alphas:
            raise ConfigError("alpha-sweep needs --alphas (comma-separated)")
        try:
            alphas = [float(t) for t in str(cfg.alphas).split(",") if t.strip()]
        except ValueError:
            raise ConfigError(f"alphas must be numbers, got {cfg.alphas!r}")
        if not alphas:
            raise ConfigError("alphas list is empty")
        problem = _build_problem(cfg, 0)
        mode = "ideal-inversion" if cfg.ideal_inversion else "full"
        curve = success_probability_curve(problem, alphas, mode=mode,
                                          resolution_shift=cfg.shift,
                                          cap=cfg.qubit_cap)
        n_eff, n_reg = _resolve_sizes(problem, cfg.shift)
        payload = {
            "config": {"M": cfg.M, "d": cfg.d,
                       "rhs": [float(x) for x in problem.rhs],
                       "n": n_eff, "n_register": n_reg,
                       "shift": cfg.shift, "mode": mode,
                       "backend": backend_name()},
            "curve": [{"alpha": a, "omega": o} for a, o in curve],
        }
        rows = [("alpha", "omega")]
        rows += [(_fmt(a), _fmt(o)) for a, o in curve]
        _emit(cfg, payload, rows)
        return 0

    raise ConfigError(f"unknown command {cfg.command!r}")


def main(argv=None) -> int:
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
        return run(cfg)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NoSuccessError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
