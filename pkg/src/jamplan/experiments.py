"""
Experiment drivers: power sweeps and head-to-head method comparisons.

In comparisons every method is trained on the optimizer's Monte Carlo batch
and then scored on an independent test batch (a separate seed stream) at the
*true* eavesdropper positions, so neither jitter draws nor position
estimates used for planning leak into the score.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field

import numpy as np

from .baselines import solve_conventional, solve_joint_12d
from .errors import InvalidArgumentError
from .jitter import TEST_STREAM
from .planner import PlanResult, report_secrecy, solve
from .scenario import Scenario, generate_random_scenario

METHODS = {
    "proposed": solve,
    "joint12d": solve_joint_12d,
    "conventional": solve_conventional,
}


def run_method(scenario: Scenario, method: str) -> PlanResult:
    try:
        fn = METHODS[method]
    except KeyError:
        raise InvalidArgumentError(f"unknown method {method!r}; choose from {sorted(METHODS)}") from None
    return fn(scenario)


def power_grid(pmin: float, pmax: float, steps: int) -> np.ndarray:
    if not (0 < pmin <= pmax):
        raise InvalidArgumentError("need 0 < pmin <= pmax")
    if steps < 2:
        raise InvalidArgumentError("steps must be >= 2")
    return np.linspace(pmin, pmax, steps)


def sweep(scenario: Scenario, pmin: float, pmax: float, steps: int, methods) -> list[dict]:
    """One row per (power cap, method), power caps in ascending order."""
    rows = []
    for cap in power_grid(pmin, pmax, steps):
        s = scenario.with_power_cap(float(cap))
        for m in methods:
            plan = run_method(s, m)
            rows.append(
                {
                    "p_max_watts": float(cap),
                    "method": m,
                    "expected_secrecy_bps": plan.expected_secrecy,
                    "std_err_bps": plan.standard_error,
                    "p_info": plan.powers.power_info,
                    "p_jam": plan.powers.power_jam,
                    "seed": scenario.seeds.optimizer,
                }
            )
    return rows


@dataclass
class TrialOutcome:
    trial: int
    seed: int
    power_cap: float
    method: str
    train_secrecy: float
    train_std_err: float
    test_secrecy: float
    test_std_err: float


@dataclass
class Comparison:
    outcomes: list[TrialOutcome] = field(default_factory=list)

    def by_method(self, method: str) -> list[TrialOutcome]:
        return [o for o in self.outcomes if o.method == method]

    def median(self, method: str) -> float:
        return statistics.median(o.test_secrecy for o in self.by_method(method))

    def win_rate(self, method: str = "proposed", against: str = "conventional") -> float:
        """Share of trials where ``method`` beats ``against`` by more than three
        combined standard errors."""
        ours, theirs = self.by_method(method), self.by_method(against)
        wins = 0
        for a, b in zip(ours, theirs):
            margin = 3.0 * math.hypot(a.test_std_err, b.test_std_err)
            wins += a.test_secrecy - b.test_secrecy > margin
        return wins / len(ours) if ours else 0.0

    def summary(self) -> dict:
        return {
            "trials": len(self.by_method("proposed")),
            "median_proposed_bps": self.median("proposed"),
            "median_joint12d_bps": self.median("joint12d"),
            "median_conventional_bps": self.median("conventional"),
            "win_rate": self.win_rate("proposed", "conventional"),
            "win_rate_vs_joint12d": self.win_rate("proposed", "joint12d"),
        }


def compare(
    trials: int,
    n_eaves: int,
    seed: int,
    *,
    jitter_std: float = 0.0,
    estimate_noise: float = 0.0,
    pmin: float = 0.1,
    pmax: float = 1.1,
    steps: int = 11,
    sample_count: int = 512,
    report_sample_count: int = 8192,
    methods=tuple(METHODS),
) -> Comparison:
    """Run every method on ``trials`` random scenarios.

    Trial ``i`` uses seed ``seed + i`` and the power cap ``grid[i % steps]`` of
    the uniform grid from ``pmin`` to ``pmax``.
    """
    if trials < 1:
        raise InvalidArgumentError("trials must be >= 1")
    caps = power_grid(pmin, pmax, steps) if steps >= 2 else np.array([pmax])
    result = Comparison()
    for i in range(trials):
        cap = float(caps[i % len(caps)])
        s = generate_random_scenario(
            n_eaves,
            seed + i,
            estimate_noise,
            jitter_std=jitter_std,
            power_cap=cap,
            sample_count=sample_count,
            report_sample_count=report_sample_count,
        )
        for m in methods:
            plan = run_method(s, m)
            test, test_se = report_secrecy(plan, s, stream=TEST_STREAM, eaves="true")
            result.outcomes.append(
                TrialOutcome(i, seed + i, cap, m, plan.expected_secrecy, plan.standard_error,
                             test, test_se)
            )
    return result
