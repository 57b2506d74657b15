"""
Command-line driver.

    jamplan solve    --scenario s.json [--method proposed] [--out record.json]
    jamplan sweep    --scenario s.json --pmin 0.1 --pmax 1.1 --steps 11 --out sweep.csv
    jamplan compare  --trials 20 --n-eaves 2 --seed 0 --out compare.csv
    jamplan validate

Exit codes: 0 success, 1 failed self-check, 2 bad flags, 3 scenario error,
4 solver failure.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
import time
from dataclasses import asdict, replace
from pathlib import Path

from . import validate
from .errors import ScenarioError
from .experiments import METHODS, compare, run_method, sweep
from .planner import PlanResult
from .scenario import (
    RunRecord,
    Scenario,
    load_scenario,
    save_record,
    write_sweep_csv,
)

log = logging.getLogger("jamplan")

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_SCENARIO, EXIT_SOLVER = 0, 1, 2, 3, 4

TRIAL_HEADER = [
    "trial",
    "seed",
    "p_max_watts",
    "method",
    "train_secrecy_bps",
    "train_std_err_bps",
    "expected_secrecy_bps",
    "std_err_bps",
]


def record_from_plan(plan: PlanResult, scenario: Scenario, wall: float) -> RunRecord:
    return RunRecord(
        method=plan.method,
        scenario_digest=scenario.digest(),
        info_position=[float(v) for v in plan.info_pose.position],
        info_orientation=[float(v) for v in plan.info_pose.orientation],
        jam_position=[float(v) for v in plan.jam_pose.position],
        jam_orientation=[float(v) for v in plan.jam_pose.orientation],
        power_info=float(plan.powers.power_info),
        power_jam=float(plan.powers.power_jam),
        power_cap=float(plan.powers.power_cap),
        expected_secrecy_bps=float(plan.expected_secrecy),
        std_err_bps=float(plan.standard_error),
        line_nu=None if plan.line is None else float(plan.line.nu),
        iterations=int(plan.iterations),
        trace=[float(v) for v in plan.trace],
        converged=bool(plan.converged),
        evaluations=int(plan.evaluations),
        seeds=asdict(scenario.seeds),
        wall_clock_seconds=wall,
    )


def _methods(text: str) -> list[str]:
    if text == "all":
        return list(METHODS)
    names = [m.strip() for m in text.split(",") if m.strip()]
    unknown = [m for m in names if m not in METHODS]
    if unknown or not names:
        raise argparse.ArgumentTypeError(
            f"unknown method(s) {unknown}; choose from {sorted(METHODS)} or 'all'"
        )
    return names


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="jamplan", description=__doc__.split("\n\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="plan one scenario")
    p.add_argument("--scenario", required=True, type=Path)
    p.add_argument("--method", choices=sorted(METHODS), default="proposed")
    p.add_argument("--mc-samples", type=_positive_int, help="override the optimizer batch size")
    p.add_argument("--seed", type=int, help="override the optimizer and Monte Carlo seeds")
    p.add_argument("--out", type=Path, help="write the run record (JSON) here")

    p = sub.add_parser("sweep", help="solve over a uniform grid of power caps")
    p.add_argument("--scenario", required=True, type=Path)
    p.add_argument("--pmin", type=float, default=0.1)
    p.add_argument("--pmax", type=float, default=1.1)
    p.add_argument("--steps", type=int, default=11)
    p.add_argument("--methods", type=_methods, default=list(METHODS),
                   help="comma-separated subset of %s, or 'all'" % ",".join(METHODS))
    p.add_argument("--out", required=True, type=Path)

    p = sub.add_parser("compare", help="head-to-head run on random scenarios")
    p.add_argument("--trials", type=_positive_int, default=20)
    p.add_argument("--n-eaves", type=_positive_int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jitter-std", type=float, default=0.0, help="radians")
    p.add_argument("--estimate-noise", type=float, default=0.0, help="meters")
    p.add_argument("--pmin", type=float, default=0.1)
    p.add_argument("--pmax", type=float, default=1.1)
    p.add_argument("--steps", type=int, default=11)
    p.add_argument("--mc-samples", type=_positive_int, default=512)
    p.add_argument("--report-samples", type=_positive_int, default=8192)
    p.add_argument("--out", required=True, type=Path)

    sub.add_parser("validate", help="run the built-in self checks")
    return parser


def cmd_solve(args) -> int:
    try:
        scenario = load_scenario(args.scenario)
        if args.mc_samples is not None:
            scenario = replace(scenario, jitter=replace(scenario.jitter, sample_count=args.mc_samples))
        if args.seed is not None:
            scenario = replace(scenario, seeds=replace(scenario.seeds, optimizer=args.seed, mc=args.seed))
    except ScenarioError as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return EXIT_SCENARIO
    t0 = time.perf_counter()
    try:
        plan = run_method(scenario, args.method)
    except Exception as exc:
        log.debug("solver failure", exc_info=True)
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    wall = time.perf_counter() - t0
    print(
        f"{args.method}: expected secrecy {plan.expected_secrecy:.6g} "
        f"+/- {plan.standard_error:.3g} bit/s  (P_I={plan.powers.power_info:.4g} W, "
        f"P_J={plan.powers.power_jam:.4g} W, {wall:.1f} s)"
    )
    if args.out is not None:
        save_record(record_from_plan(plan, scenario, wall), args.out)
    return EXIT_OK


def cmd_sweep(args, parser) -> int:
    if not (0 < args.pmin <= args.pmax):
        parser.error("need 0 < --pmin <= --pmax")
    if args.steps < 2:
        parser.error("--steps must be >= 2")
    try:
        scenario = load_scenario(args.scenario)
    except ScenarioError as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return EXIT_SCENARIO
    try:
        rows = sweep(scenario, args.pmin, args.pmax, args.steps, args.methods)
    except Exception as exc:
        log.debug("solver failure", exc_info=True)
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    write_sweep_csv(rows, args.out)
    for r in rows:
        print(f"P_max={r['p_max_watts']:.4g} W  {r['method']:<13} {r['expected_secrecy_bps']:.6g} bit/s")
    return EXIT_OK


def summary_path(out: Path) -> Path:
    return out.with_name(out.stem + ".summary.csv")


def cmd_compare(args, parser) -> int:
    if args.jitter_std < 0 or args.estimate_noise < 0:
        parser.error("--jitter-std and --estimate-noise must be >= 0")
    if not (0 < args.pmin <= args.pmax):
        parser.error("need 0 < --pmin <= --pmax")
    if args.steps < 1:
        parser.error("--steps must be >= 1")
    try:
        result = compare(
            args.trials,
            args.n_eaves,
            args.seed,
            jitter_std=args.jitter_std,
            estimate_noise=args.estimate_noise,
            pmin=args.pmin,
            pmax=args.pmax,
            steps=args.steps,
            sample_count=args.mc_samples,
            report_sample_count=args.report_samples,
        )
    except Exception as exc:
        log.debug("solver failure", exc_info=True)
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRIAL_HEADER)
        for o in result.outcomes:
            w.writerow([o.trial, o.seed, o.power_cap, o.method, o.train_secrecy,
                        o.train_std_err, o.test_secrecy, o.test_std_err])
    summary = result.summary()
    with open(summary_path(args.out), "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(summary), lineterminator="\n")
        w.writeheader()
        w.writerow(summary)
    for key, value in summary.items():
        print(f"{key:<26} {value:.6g}" if isinstance(value, float) else f"{key:<26} {value}")
    return EXIT_OK


def cmd_validate(args) -> int:
    results = validate.run_checks()
    width = max(len(name) for name, _, _ in results)
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name:<{width}}  {detail}")
    failed = [name for name, ok, _ in results if not ok]
    if failed:
        print(f"{len(failed)} check(s) failed: {', '.join(failed)}")
        return EXIT_CHECK
    print(f"all {len(results)} checks passed")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "solve":
        return cmd_solve(args)
    if args.command == "sweep":
        return cmd_sweep(args, parser)
    if args.command == "compare":
        return cmd_compare(args, parser)
    return cmd_validate(args)


if __name__ == "__main__":
    sys.exit(main())
