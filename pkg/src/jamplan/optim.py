"""
Box-constrained local optimizers used by the planner and the baselines.

Both work on the unit cube: callers map their decision variables to
``[0, 1]^n`` and back. Objectives are *maximized*.

``nelder_mead_box``
    Derivative-free simplex search; every trial point is projected onto the
    cube before evaluation, so the objective never sees an infeasible point.
``barrier_ascent``
    Log-barrier interior-point method with central-difference gradients and
    BFGS steps, driven through a decreasing sequence of barrier weights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

Objective = Callable[[np.ndarray], float]


@dataclass
class LocalResult:
    x: np.ndarray
    value: float
    evaluations: int
    converged: bool
    history: list[float] = field(default_factory=list)


class _Counted:
    """Wraps an objective, counts calls and remembers the best point seen."""

    def __init__(self, fun: Objective, budget: int):
        self.fun = fun
        self.budget = budget
        self.calls = 0
        self.best_x: np.ndarray | None = None
        self.best_f = -math.inf

    @property
    def exhausted(self) -> bool:
        return self.calls >= self.budget

    def __call__(self, x: np.ndarray) -> float:
        self.calls += 1
        f = float(self.fun(x))
        if not math.isfinite(f):
            f = -math.inf
        if f > self.best_f:
            self.best_f, self.best_x = f, x.copy()
        return f


def nelder_mead_box(
    fun: Objective,
    x0: np.ndarray,
    *,
    step: float = 0.1,
    max_evals: int = 4000,
    xtol: float = 1e-7,
    ftol: float = 1e-10,
    restarts: int = 2,
) -> LocalResult:
    """Maximize ``fun`` over the unit cube starting from ``x0``.

    Uses the dimension-adaptive coefficients of Gao and Han (2012). After
    convergence the simplex is rebuilt around the best vertex up to
    ``restarts`` times; a rebuild that brings no improvement ends the search.
    """
    x0 = np.clip(np.asarray(x0, dtype=float), 0.0, 1.0)
    n = x0.size
    rho, chi = 1.0, 1.0 + 2.0 / n
    gamma, sigma = 0.75 - 1.0 / (2 * n), 1.0 - 1.0 / n
    f = _Counted(lambda u: fun(np.clip(u, 0.0, 1.0)), max_evals)

    def project(u):
        return np.clip(u, 0.0, 1.0)

    x_best = x0
    f_best = f(x0)
    history = [f_best]
    converged = False
    for attempt in range(restarts + 1):
        sim = np.tile(x_best, (n + 1, 1))
        for i in range(n):
            sim[i + 1, i] += step if x_best[i] + step <= 1.0 else -step
        vals = np.empty(n + 1)
        vals[0] = f_best
        for i in range(1, n + 1):
            vals[i] = f(sim[i])
        converged = False
        while not f.exhausted:
            order = np.argsort(-vals, kind="stable")
            sim, vals = sim[order], vals[order]
            spread = vals[0] - vals[-1]
            diameter = np.max(np.abs(sim[1:] - sim[0]))
            if diameter <= xtol or spread <= ftol * (1.0 + abs(vals[0])):
                converged = True
                break
            centroid = sim[:-1].mean(axis=0)
            xr = project(centroid + rho * (centroid - sim[-1]))
            fr = f(xr)
            if fr > vals[0]:
                xe = project(centroid + chi * (xr - centroid))
                fe = f(xe)
                if fe > fr:
                    sim[-1], vals[-1] = xe, fe
                else:
                    sim[-1], vals[-1] = xr, fr
            elif fr > vals[-2]:
                sim[-1], vals[-1] = xr, fr
            else:
                if fr > vals[-1]:
                    xc = project(centroid + gamma * (xr - centroid))
                    fc = f(xc)
                    accept = fc >= fr
                else:
                    xc = project(centroid + gamma * (sim[-1] - centroid))
                    fc = f(xc)
                    accept = fc > vals[-1]
                if accept:
                    sim[-1], vals[-1] = xc, fc
                else:
                    for i in range(1, n + 1):
                        sim[i] = project(sim[0] + sigma * (sim[i] - sim[0]))
                        vals[i] = f(sim[i])
        i_top = int(np.argmax(vals))
        improved = vals[i_top] > f_best + ftol * (1.0 + abs(f_best))
        if vals[i_top] >= f_best:
            x_best, f_best = sim[i_top].copy(), float(vals[i_top])
        history.append(f_best)
        if not improved or f.exhausted:
            break
    return LocalResult(x_best, f_best, f.calls, converged and not f.exhausted, history)


@dataclass(frozen=True)
class BarrierSchedule:
    mu0: float = 1.0
    factor: float = 0.2
    stages: int = 6
    fd_step: float = 1e-6
    max_iter: int = 40
    interior_margin: float = 1e-3


def barrier_ascent(
    fun: Objective,
    x0: np.ndarray,
    *,
    scale: float = 1.0,
    schedule: BarrierSchedule = BarrierSchedule(),
    max_evals: int = 20000,
) -> LocalResult:
    """Maximize ``fun`` over the open unit cube by a sequence of barrier problems.

    Each stage minimizes ``-fun(u)/scale - mu * sum(log u + log(1 - u))`` with
    BFGS and Armijo backtracking, then shrinks ``mu`` by ``schedule.factor``.
    The returned point is the last interior iterate.
    """
    n = np.asarray(x0).size
    m = schedule.interior_margin
    u = np.clip(np.asarray(x0, dtype=float), m, 1.0 - m)
    f = _Counted(fun, max_evals)
    h = schedule.fd_step

    def barrier(v, mu):
        if np.any(v <= 0.0) or np.any(v >= 1.0):
            return math.inf
        return -mu * float(np.sum(np.log(v) + np.log1p(-v)))

    def barrier_grad(v, mu):
        return -mu * (1.0 / v - 1.0 / (1.0 - v))

    def obj_grad(v, fv):
        g = np.empty(n)
        for i in range(n):
            hi = min(h, 1.0 - v[i])
            lo = min(h, v[i])
            vp, vm = v.copy(), v.copy()
            vp[i] += hi
            vm[i] -= lo
            fp = f(vp) if hi > 0 else fv
            fm = f(vm) if lo > 0 else fv
            g[i] = (fp - fm) / (hi + lo)
        return g

    fu = f(u)
    history = [fu]
    mu = schedule.mu0
    converged = True
    for _ in range(schedule.stages):
        phi = -fu / scale + barrier(u, mu)
        grad = -obj_grad(u, fu) / scale + barrier_grad(u, mu)
        hinv = np.eye(n)
        for _ in range(schedule.max_iter):
            if f.exhausted:
                converged = False
                break
            d = -hinv @ grad
            slope = float(grad @ d)
            if slope >= 0:
                hinv = np.eye(n)
                d = -grad
                slope = -float(grad @ grad)
            if slope > -1e-14:
                break
            # largest step that stays strictly inside the cube
            with np.errstate(divide="ignore", invalid="ignore"):
                to_upper = np.where(d > 0, (1.0 - u) / d, np.inf)
                to_lower = np.where(d < 0, -u / d, np.inf)
            t = min(1.0, 0.99 * float(min(to_upper.min(), to_lower.min())))
            accepted = False
            while t > 1e-12 and not f.exhausted:
                cand = u + t * d
                b = barrier(cand, mu)
                if math.isfinite(b):
                    fc = f(cand)
                    phic = -fc / scale + b
                    if phic <= phi + 1e-4 * t * slope:
                        accepted = True
                        break
                t *= 0.5
            if not accepted:
                break
            s = cand - u
            grad_new = -obj_grad(cand, fc) / scale + barrier_grad(cand, mu)
            y = grad_new - grad
            sy = float(s @ y)
            if sy > 1e-12:
                r = 1.0 / sy
                i_ = np.eye(n)
                hinv = (i_ - r * np.outer(s, y)) @ hinv @ (i_ - r * np.outer(y, s)) + r * np.outer(s, s)
            decrease = phi - phic
            u, fu, phi, grad = cand, fc, phic, grad_new
            if decrease <= 1e-12 * (1.0 + abs(phi)):
                break
        history.append(fu)
        mu *= schedule.factor
    return LocalResult(u, fu, f.calls, converged, history)
