"""Command-line entry point: ``weakmeas {figure1,distribution,negativity,correlate,verify}``.

Exit status is 0 on success, 1 when a numerical check fails and 2 for
configuration errors.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from pathlib import Path

import numpy as np

from .correlation import correlation_report
from .engine import PDF_FLOOR, DensityMatrix, MeasurementModel, outcome_pdf, posterior
from .errors import ConfigError
from .config import ScenarioConfig
from .infonoise import negativity, noise_free_state, purity
from .linalg import HermitianObservable
from .spinhalf import count_local_maxima, figure1_outcomes
from .states import PLUS_X, SX, SZ
from .verify import run_checks

EXIT_OK, EXIT_CHECK_FAILED, EXIT_CONFIG = 0, 1, 2
CORRELATION_EXIT_TOL = 1e-6
DEFAULT_FIGURE_ROWS = 201
DEFAULT_NEGATIVITY_ROWS = 201


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _csv(header: list[str], rows, footer: dict | None = None) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    for key, value in (footer or {}).items():
        buf.write(f"# {key}={value}\n")
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8", newline="\n")


def figure1_table(delta: float, n: int) -> list[tuple[float, float, float, float, float]]:
    """Noise-free and full-measurement Bloch coordinates for an ``s_z`` readout on ``|+X>``."""
    model = MeasurementModel(HermitianObservable(SZ), delta)
    rho = DensityMatrix.pure(PLUS_X)
    rows = []
    for a in figure1_outcomes(delta, n):
        q = noise_free_state(model, rho, a)
        f = posterior(model, rho, a)
        rows.append((a, q.expect(SX), q.expect(SZ), f.expect(SX), f.expect(SZ)))
    return rows


def cmd_figure1(cfg: ScenarioConfig) -> int:
    n = cfg.outcomes or DEFAULT_FIGURE_ROWS
    rows = figure1_table(cfg.delta, n)
    _emit(_csv(["outcome", "sx_m", "sz_m", "sx_f", "sz_f"], rows), cfg.out)
    return EXIT_OK


def distribution_table(cfg: ScenarioConfig):
    grid = cfg.grid
    p = outcome_pdf(cfg.model, cfg.rho, grid.nodes)
    footer = {"local_maxima": count_local_maxima(p), "integral": _fmt(grid.integrate(p))}
    return list(zip(grid.nodes, p)), footer


def cmd_distribution(cfg: ScenarioConfig) -> int:
    rows, footer = distribution_table(cfg)
    _emit(_csv(["outcome", "pdf"], rows, footer), cfg.out)
    return EXIT_OK


def negativity_table(cfg: ScenarioConfig):
    model, rho = cfg.model, cfg.rho
    n = cfg.outcomes or cfg.grid_n or DEFAULT_NEGATIVITY_ROWS
    rows = []
    for a in np.linspace(cfg.grid.lo, cfg.grid.hi, n):
        p = outcome_pdf(model, rho, a)
        if p > PDF_FLOOR:
            q = noise_free_state(model, rho, a)
            lo, total = negativity(q)
            rows.append((a, p, lo, total, purity(q)))
        else:
            rows.append((a, p, np.nan, np.nan, np.nan))
    return rows


def cmd_negativity(cfg: ScenarioConfig) -> int:
    rows = negativity_table(cfg)
    header = ["outcome", "pdf", "min_eig_rho_m", "total_negativity", "purity_rho_m"]
    _emit(_csv(header, rows), cfg.out)
    return EXIT_OK


def _describe(name: str, matrix: str | None, dim: int) -> str:
    if matrix is not None:
        return "explicit"
    if name == "auto":
        return "spin-x" if dim == 2 else "random"
    return name


def cmd_correlate(cfg: ScenarioConfig) -> int:
    report = correlation_report(
        cfg.model, cfg.rho, cfg.b_observable, cfg.grid,
        observable=_describe(cfg.observable, cfg.observable_matrix, cfg.model.dim),
        other=_describe(cfg.b, cfg.b_matrix, cfg.model.dim),
    )
    _emit(json.dumps(report.as_dict(), indent=2) + "\n", cfg.out)
    return EXIT_CHECK_FAILED if report.discrepancy > CORRELATION_EXIT_TOL else EXIT_OK


def cmd_verify(cfg: ScenarioConfig) -> int:
    checks = run_checks(cfg.model, cfg.rho, cfg.b_observable)
    ok = all(c.passed for c in checks)
    lines = [c.line() for c in checks]
    lines.append(f"{'PASS' if ok else 'FAIL'}  {sum(c.passed for c in checks)}/{len(checks)} checks")
    _emit("\n".join(lines) + "\n", cfg.out)
    return EXIT_OK if ok else EXIT_CHECK_FAILED


COMMANDS = {
    "figure1": cmd_figure1,
    "distribution": cmd_distribution,
    "negativity": cmd_negativity,
    "correlate": cmd_correlate,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="scenario file (key = value lines)")
    common.add_argument("--out", help="output path; stdout if omitted")
    common.add_argument("--delta", type=float, help="measurement resolution")
    common.add_argument("--outcomes", type=int, help="number of outcome rows / grid nodes")
    common.add_argument("--seed", type=int, help="seed for random presets")
    common.add_argument("--dim", type=int, help="system dimension for random presets")
    common.add_argument("--observable", help="observable preset (spin-x|spin-y|spin-z|random)")
    common.add_argument("--state", help="state preset (plus-x|plus-z|mixed|random|random-mixed|...)")
    common.add_argument("--b", help="second observable for correlate (spin-x|identity|observable|random|...)")

    parser = argparse.ArgumentParser(prog="weakmeas", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def load_scenario(args: argparse.Namespace) -> ScenarioConfig:
    cfg = ScenarioConfig.from_file(args.config) if args.config else ScenarioConfig()
    cfg = cfg.override(dim=args.dim, delta=args.delta, outcomes=args.outcomes, seed=args.seed,
                       out=args.out, observable=args.observable, state=args.state, b=args.b)
    if args.command == "distribution" and cfg.outcomes is not None:
        cfg = cfg.override(grid_n=cfg.outcomes)
    return cfg.validate()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_scenario(args)
        return COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"weakmeas: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
