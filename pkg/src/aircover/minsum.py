"""Minimize the total deployment delay.

* ``greedy_common_origin_minsum`` -- shared-origin fleets: always send the
  largest remaining radius to the far frontier. Linear after sorting;
  exactly optimal when altitudes and speeds are uniform, and within a
  kappa*tau factor of optimal in general.
* ``dp_minsum`` -- dispersed fleets under order preservation: a
  pseudo-polynomial dynamic program over a discretized delay budget. The
  table cell R[i][j] holds the longest covered left-aligned prefix
  achievable with the first i agents and total budget j grid steps;
  backpointers reconstruct the witness deployment.

The DP inner loops are JIT-compiled with numba when available; a pure
Python twin with identical semantics is kept both as a fallback and as a
reference for tests (set AIRCOVER_NO_NUMBA=1 to force it).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import GridExhaustedError, InfeasibleError, UnsupportedError
from .model import (
    Deployment,
    Instance,
    Metric,
    Placement,
    Uav,
    bounds,
    common_origin,
    footprint_halfwidth,
    geom_tol,
    reflect_instance,
)
from .minmax import fptas_minmax

DEFAULT_GRID_STEPS = 2000


@dataclass(frozen=True)
class DpTable:
    """The filled budget table plus backpointers.

    ``table[i, j]`` is the longest left-aligned covered prefix (km) using
    the first i agents within j budget steps of ``grid_unit`` hours each.
    """

    grid_unit: float
    steps: int
    table: np.ndarray
    used: np.ndarray
    t_choice: np.ndarray
    y_choice: np.ndarray


@dataclass(frozen=True)
class MinSumSolution:
    deployment: Deployment
    objective: float
    method: str
    grid_unit: Optional[float] = None
    table: Optional[DpTable] = None


# ---------------------------------------------------------------------------
# Shared-origin greedy
# ---------------------------------------------------------------------------


def _greedy_minsum_core(
    uavs: Sequence[Uav], beta: float, d: float, metric: Metric, origin: float
) -> list[tuple[Uav, float]]:
    tol = geom_tol(beta)
    frontier = beta
    available = sorted(uavs, key=lambda u: (-u.r, u.id))
    placed: list[tuple[Uav, float]] = []
    for u in available:
        if frontier <= tol:
            break
        w = footprint_halfwidth(u, d)
        y = max(frontier - w, origin)
        placed.append((u, y))
        frontier = y - w
    if frontier > tol:
        raise InfeasibleError("agents exhausted with %.6g km uncovered" % frontier)
    return placed


def greedy_common_origin_minsum(instance: Instance) -> MinSumSolution:
    """Largest-radius-first dispatch from a shared origin outside the
    target. Optimal for uniform altitude and speed; within kappa*tau of
    optimal otherwise."""
    instance.require_strip_coverable()
    x0 = common_origin(instance)
    tol = instance.geom_tol
    if x0 <= tol:
        placed = _greedy_minsum_core(instance.uavs, instance.beta, instance.d, instance.metric, min(x0, 0.0))
    elif x0 >= instance.beta - tol:
        mirrored = reflect_instance(instance)
        got = _greedy_minsum_core(
            mirrored.uavs, instance.beta, instance.d, instance.metric, min(instance.beta - x0, 0.0)
        )
        placed = [(instance.by_id(u.id), instance.beta - y) for u, y in got]
    else:
        raise UnsupportedError(
            "the total-delay greedy needs the shared origin outside the target"
        )
    zp = 0.0 if instance.has_offsets else None
    deployment = Deployment.build(instance, [Placement(u.id, y, zp) for u, y in placed])
    return MinSumSolution(deployment=deployment, objective=deployment.total_delay, method="greedy_common_origin")


# ---------------------------------------------------------------------------
# DP kernel: one pure Python body, optionally JIT-compiled
# ---------------------------------------------------------------------------


def _dp_fill_py(R, used, tch, ych, xs, ws, reach, tol):
    """Fill R/backpointers in place.

    For agent i with per-agent budget t (reach[i-1, t] km of horizontal
    movement, negative = grounded) and the previous prefix rp:
      * rp below x - w - reach: a gap remains, no extension;
      * rp below x - w: approach from the left, extend to rp + 2w;
      * otherwise extend to min(x + w + reach, rp + 2w) unless the window
        has already been passed.
    """
    n = reach.shape[0]
    budgets = R.shape[1]
    for i in range(1, n + 1):
        xi = xs[i - 1]
        wi = ws[i - 1]
        lo_edge = xi - wi
        for j in range(budgets):
            best = R[i - 1, j]
            bu = False
            bt = 0
            by = 0.0
            for t in range(j + 1):
                m = reach[i - 1, t]
                if m < 0.0:
                    continue
                rp = R[i - 1, j - t]
                if rp < lo_edge - m - tol:
                    continue
                if rp < lo_edge:
                    ext = rp + 2.0 * wi
                    y = rp + wi
                    if y < xi - m:
                        y = xi - m
                else:
                    top = xi + wi + m
                    if rp >= top:
                        continue
                    ext = rp + 2.0 * wi
                    if top < ext:
                        ext = top
                    y = ext - wi
                if ext > best:
                    best = ext
                    bu = True
                    bt = t
                    by = y
            R[i, j] = best
            used[i, j] = bu
            tch[i, j] = bt
            ych[i, j] = by


if os.environ.get("AIRCOVER_NO_NUMBA"):
    _dp_fill = _dp_fill_py
else:
    try:
        from numba import njit

        _dp_fill = njit(cache=True)(_dp_fill_py)
    except ImportError:  # pragma: no cover - numba is a declared dependency
        _dp_fill = _dp_fill_py


def _reach_matrix(
    uavs: Sequence[Uav], grid_unit: float, budgets: int, metric: Metric
) -> np.ndarray:
    """reach[i, t] = horizontal km agent i can move with budget t steps;
    negative when even the ascent does not fit."""
    t_hours = np.arange(budgets, dtype=np.float64) * grid_unit
    out = np.empty((len(uavs), budgets), dtype=np.float64)
    for i, u in enumerate(uavs):
        if metric == "manhattan":
            out[i] = u.v * t_hours - u.h - abs(u.z)
        else:
            sq = (u.v * t_hours) ** 2 - u.h**2 - u.z**2
            out[i] = np.where(sq >= 0.0, np.sqrt(np.maximum(sq, 0.0)), -1.0)
    return out


def _dp_core(
    uavs: Sequence[Uav],
    beta: float,
    d: float,
    metric: Metric,
    grid_unit: float,
    gamma_u: float,
    fill=None,
) -> tuple[Optional[int], list[tuple[Uav, float, int]], DpTable]:
    """Run the DP over ``uavs`` in the given order.

    Returns (smallest feasible budget j* or None, [(agent, y, t)] from the
    backtrace, the table). The budget axis gets n extra steps beyond
    ceil(gamma_u / grid_unit) to absorb the per-agent upward rounding.
    """
    tol = geom_tol(beta)
    n = len(uavs)
    steps = math.ceil(gamma_u / grid_unit - 1e-12) + n
    budgets = steps + 1
    xs = np.array([u.x for u in uavs], dtype=np.float64)
    ws = np.array([footprint_halfwidth(u, d) for u in uavs], dtype=np.float64)
    reach = _reach_matrix(uavs, grid_unit, budgets, metric)
    R = np.zeros((n + 1, budgets), dtype=np.float64)
    used = np.zeros((n + 1, budgets), dtype=np.bool_)
    tch = np.zeros((n + 1, budgets), dtype=np.int32)
    ych = np.zeros((n + 1, budgets), dtype=np.float64)
    (fill or _dp_fill)(R, used, tch, ych, xs, ws, reach, tol)
    table = DpTable(grid_unit=grid_unit, steps=steps, table=R, used=used, t_choice=tch, y_choice=ych)
    hits = np.nonzero(R[n] >= beta - tol)[0]
    if hits.size == 0:
        return None, [], table
    jstar = int(hits[0])
    chosen: list[tuple[Uav, float, int]] = []
    j = jstar
    for i in range(n, 0, -1):
        if used[i, j]:
            chosen.append((uavs[i - 1], float(ych[i, j]), int(tch[i, j])))
            j -= int(tch[i, j])
    chosen.reverse()
    return jstar, chosen, table


def dp_minsum(
    instance: Instance,
    grid_unit: Optional[float] = None,
    grid_steps: int = DEFAULT_GRID_STEPS,
    keep_table: bool = False,
) -> MinSumSolution:
    """Optimal order-preserving total delay on a discretized budget grid.

    The default grid unit splits the total-delay upper bound into
    ``grid_steps`` steps. The reported objective is the grid value
    (smallest feasible budget times the unit); the deployment carries the
    recomputed continuous travel times, which round down from the budgets.
    Runs in O(n * G^2).
    """
    instance.require_strip_coverable()
    gamma_u = bounds(instance).gamma_u
    if grid_unit is None:
        if grid_steps <= 0:
            raise ValueError("grid_steps must be positive")
        grid_unit = gamma_u / grid_steps
    if grid_unit <= 0:
        raise ValueError("grid_unit must be positive")
    jstar, chosen, table = _dp_core(
        instance.uavs, instance.beta, instance.d, instance.metric, grid_unit, gamma_u
    )
    if jstar is None:
        raise GridExhaustedError(
            "budget grid exhausted before full coverage (grid unit %.6g h)" % grid_unit
        )
    zp = 0.0 if instance.has_offsets else None
    deployment = Deployment.build(instance, [Placement(u.id, y, zp) for u, y, _ in chosen])
    return MinSumSolution(
        deployment=deployment,
        objective=jstar * grid_unit,
        method="dp",
        grid_unit=grid_unit,
        table=table if keep_table else None,
    )


# ---------------------------------------------------------------------------
# Cross-family bound check
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CrossBoundsReport:
    """Both solvers run on one instance, with the mutual approximation
    bounds evaluated. ``sum_ok``/``max_ok`` report the bound checks; slack
    terms account for the two discretizations."""

    t_minmax: float
    gamma_minmax: float
    gamma_minsum: float
    t_minsum: float
    n: int
    epsilon: float
    grid_unit: float
    grid_step: float
    sum_ok: bool
    max_ok: bool

    @property
    def ok(self) -> bool:
        return self.sum_ok and self.max_ok


def cross_bounds_check(
    instance: Instance,
    epsilon: float = 1e-4,
    grid_unit: Optional[float] = None,
    grid_steps: int = DEFAULT_GRID_STEPS,
) -> CrossBoundsReport:
    """Run the deadline FPTAS and the budget DP on one instance and check
    that each stays within its proven factor of the other:

      gamma_dp <= gamma_fptas + n*delta            (DP minimizes the sum)
      gamma_fptas <= n(1+eps)*gamma_dp + n*delta   (n(1+eps)-approximation)
      t_fptas <= t_dp + grid step                  (FPTAS minimizes the max)
      t_dp <= n*t_fptas + n*delta                  (n-approximation)
    """
    mm = fptas_minmax(instance, epsilon)
    ms = dp_minsum(instance, grid_unit=grid_unit, grid_steps=grid_steps)
    n = instance.n
    delta = ms.grid_unit
    step = mm.grid_step or 0.0
    tol = 1e-9 * max(1.0, mm.objective, ms.objective)
    gamma_fptas = mm.deployment.total_delay
    gamma_dp = ms.objective
    t_fptas = mm.objective
    t_dp = ms.deployment.max_delay
    sum_ok = (gamma_dp <= gamma_fptas + n * delta + tol) and (
        gamma_fptas <= n * (1.0 + epsilon) * gamma_dp + n * delta + tol
    )
    max_ok = (t_fptas <= t_dp + step + tol) and (t_dp <= n * t_fptas + n * delta + tol)
    return CrossBoundsReport(
        t_minmax=t_fptas,
        gamma_minmax=gamma_fptas,
        gamma_minsum=gamma_dp,
        t_minsum=t_dp,
        n=n,
        epsilon=epsilon,
        grid_unit=delta,
        grid_step=step,
        sum_ok=sum_ok,
        max_ok=max_ok,
    )
