"""
Biocontrol Budget — Orchestrator
================================
"How many predators per season keep the field pest-free?"

Subcommands:
  simulate   integrate the impulsive model, write trace.csv
  periodic   pest-free periodic solution: periodic.csv (t, y) + periodic.json (y*, integral)
  budget     minimal budget thresholds and classification, budget.json
  sweep      budget versus release-to-harvest ratio, sweep.csv
  verify     closed forms against independent oracles, pass/fail per check

Exit codes: 0 ok, 1 runtime failure, 2 config error, 3 verify failure.

Usage:
  python -m biocontrol_budget.main budget --config biocontrol_budget/config.yaml
  python -m biocontrol_budget.main sweep  --config sweep.yaml
  python -m biocontrol_budget.main verify --seed 7
"""

from __future__ import annotations

import argparse
import logging
import sys

import numpy as np
import pandas as pd

from .analytic.periodic import PeriodicSolution
from .config.loader import CONFIG_PATH, RunConfig, load_config
from .errors import ConfigError
from .model.hypotheses import validate_hypotheses
from .sim.integrator import default_dt, simulate
from .sim.trace import detect_extinction
from .stability.budget import classify
from .stability.sweep import budget_curve
from .utils.csv_output import save_json, save_table
from .verify.checks import run_all

# Windows UTF-8 fix
if sys.platform == "win32":
    sys.stdout.reconfigure(encoding="utf-8")

logger = logging.getLogger("biocontrol_budget")

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_CONFIG = 2
EXIT_VERIFY = 3


def _section(title: str) -> None:
    print(f"\n{'─' * 55}")
    print(f"  {title}")
    print(f"{'─' * 55}")


# ── Subcommands ────────────────────────────────────────────────────

def _run_simulate(config: RunConfig) -> int:
    config.require_sim()
    model, params, sim = config.build_model(), config.params, config.sim
    _section(f"SIMULATE — {params.regime}, t_end={sim.t_end:g}")

    trace = simulate(model, params, sim.x0, sim.y0, sim.t_end,
                     dt=sim.dt or default_dt(params), record_every=sim.record_every)
    save_table(trace.to_frame(), config.output.directory, "trace")
    print(f"  [SIM] {len(trace.impulses)} impulses, {len(trace)} rows")
    if trace.clamped:
        print(f"  [SIM] {trace.clamp_count} negative roundoff value(s) clamped to 0")

    hold = sim.extinction_hold if sim.extinction_hold is not None else 10 * max(params.T_h, params.T_r)
    if hold <= trace.t_end:
        extinct_at = detect_extinction(trace, sim.extinction_threshold, hold)
        if extinct_at is None:
            print(f"  [SIM] Pest persists (x >= {sim.extinction_threshold:g} within every {hold:g} window)")
        else:
            print(f"  [SIM] Pest below {sim.extinction_threshold:g} from t={extinct_at:.6g}")
    return EXIT_OK


def _run_periodic(config: RunConfig) -> int:
    params = config.params
    solution = PeriodicSolution.from_params(params)
    _section(f"PERIODIC — {solution.regime}, y*={solution.y_star:.9g}")

    times = np.linspace(0.0, solution.period, config.output.samples, endpoint=False)
    frame = pd.DataFrame({"t": times, "y": [solution(float(t)) for t in times]})
    save_table(frame, config.output.directory, "periodic")
    save_json(
        {
            "regime": solution.regime.kind,
            "k": solution.k,
            "period": solution.period,
            "y_star": solution.y_star,
            "integral": solution.integral(),
            "params": params.to_dict(),
        },
        config.output.directory,
        "periodic",
    )
    return EXIT_OK


def _run_budget(config: RunConfig) -> int:
    model = config.build_model()
    _section(f"BUDGET — {config.params.regime}, mu={config.params.mu:g}")

    hypotheses = validate_hypotheses(model, config.model.grid_n)
    for check in hypotheses.failures:
        print(f"  [MODEL] FAIL {check.name} at x={check.witness} ({check.detail})")
    report = classify(model, config.params, config.model.grid_n)
    print(f"  [BUDGET] mu_lower local={report.mu_lower_local:.9g} global={report.mu_lower_global:.9g}")
    print(f"  [BUDGET] Classification: {report.classification}" + (" (boundary)" if report.boundary else ""))
    if report.sup_not_reached:
        print(f"  [BUDGET] sup of {', '.join(report.sup_not_reached)} not reached within x_max; "
              f"mu_lower global may be low, increase model.x_max")

    payload = report.to_dict()
    payload["model"] = model.describe()
    payload["params"] = config.params.to_dict()
    payload["hypotheses"] = hypotheses.to_dict()
    save_json(payload, config.output.directory, "budget")
    return EXIT_OK


def _run_sweep(config: RunConfig) -> int:
    model = config.build_model()
    _section(f"SWEEP — {len(config.sweep.ratios)} ratios, T_h={config.params.T_h:g}")

    curve = budget_curve(model, config.params, config.sweep.ratios, config.sweep.k_max, config.model.grid_n)
    for row in curve.itertuples(index=False):
        print(f"  [SWEEP] T_r/T_h={row.ratio:<8.4g} k={row.k:<3d} mu_local={row.mu_local:.6f} "
              f"mu_global={row.mu_global:.6f}")
    save_table(curve, config.output.directory, "sweep")
    return EXIT_OK


def _run_verify(config: RunConfig, seed: int) -> int:
    _section(f"VERIFY — seed {seed}")
    results = run_all(config.build_model(), np.random.default_rng(seed), config.model.grid_n)
    for result in results:
        print(f"  [{'PASS' if result.passed else 'FAIL'}] {result.name}: {result.detail}")
    failed = [r for r in results if not r.passed]
    print(f"\n  {len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_VERIFY if failed else EXIT_OK


# ── Orchestrator ───────────────────────────────────────────────────

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="biocontrol_budget",
        description="Biocontrol Budget — impulsive predator–prey crop protection",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python -m biocontrol_budget.main simulate --config run.yaml    # trace.csv
  python -m biocontrol_budget.main periodic --config run.yaml    # periodic.csv + periodic.json
  python -m biocontrol_budget.main budget   --config run.yaml    # budget.json
  python -m biocontrol_budget.main sweep    --config run.yaml    # sweep.csv
  python -m biocontrol_budget.main verify   --seed 3             # oracle checks
        """,
    )
    parser.add_argument("command", choices=["simulate", "periodic", "budget", "sweep", "verify"])
    parser.add_argument("--config", default=str(CONFIG_PATH), help="YAML run configuration")
    parser.add_argument("--seed", type=int, default=0, help="Seed for the random draws of verify")
    parser.add_argument("--quiet", action="store_true", help="Only log warnings and errors")
    return parser


def run(argv: list[str] | None = None) -> int:
    """Parse arguments, load config, dispatch. Returns the process exit code."""
    args = _build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING if args.quiet else logging.INFO,
        format="%(asctime)s - %(levelname)s - %(message)s",
    )

    print(f"\n{'═' * 55}")
    print(f"  Biocontrol Budget — {args.command}")
    print(f"  config: {args.config}")
    print(f"{'═' * 55}")

    try:
        config = load_config(args.config)
    except ConfigError as e:
        print(f"  [CONFIG] {e}")
        return EXIT_CONFIG

    try:
        if args.command == "simulate":
            code = _run_simulate(config)
        elif args.command == "periodic":
            code = _run_periodic(config)
        elif args.command == "budget":
            code = _run_budget(config)
        elif args.command == "sweep":
            code = _run_sweep(config)
        else:
            code = _run_verify(config, args.seed)
    except ConfigError as e:
        print(f"  [CONFIG] {e}")
        return EXIT_CONFIG
    except Exception as e:
        logger.exception(f"[RUN] {args.command} failed")
        print(f"  [ERROR] {type(e).__name__}: {e}")
        return EXIT_RUNTIME

    print(f"\n  Status: {'OK' if code == EXIT_OK else 'FAIL'}")
    print(f"{'═' * 55}\n")
    return code


def main():
    """CLI entry point."""
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
