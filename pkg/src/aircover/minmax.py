"""Minimize the maximum deployment delay.

Two solvers live here:

* ``solve_common_origin_minmax`` -- exact greedy for fleets dispatched from
  one shared location outside the target (O(n^2)): repeatedly send the
  agent that reaches the current far frontier fastest.
* ``fptas_minmax`` -- for dispersed fleets under order preservation:
  binary search on a deadline grid of step ``epsilon * t_l`` over the
  O(n^2) feasibility sweep, giving a (1+epsilon) guarantee in
  O(n^2 log(1/epsilon)).

The feasibility sweep (``check_feasibility``) walks agents left to right,
maintaining the covered prefix [0, frontier]; an agent that can seamlessly
cover the frontier is pushed as far right as its deadline window allows,
and any earlier agent it strictly overtakes is retracted and left unused.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import InfeasibleError, UnsupportedError
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
    horizontal_reach,
    reflect_instance,
    travel_time,
)

# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FeasibilityOutcome:
    """Verdict of one deadline probe.

    ``reach`` maps agent id to its coverable window (a, b) along the axis,
    or None when the deadline does not even pay for the vertical ascent.
    ``prefix`` is the longest covered prefix the sweep achieved; no
    order-preserving placement within the deadline covers a longer one.
    """

    feasible: bool
    placements: tuple[Placement, ...]
    reach: dict[int, Optional[tuple[float, float]]]
    prefix: float


@dataclass(frozen=True)
class MinMaxSolution:
    deployment: Deployment
    objective: float
    method: str
    epsilon: Optional[float] = None
    grid_step: Optional[float] = None


# ---------------------------------------------------------------------------
# Feasibility sweep (shared with the oracles, which probe arbitrary orders)
# ---------------------------------------------------------------------------


def sweep_order(
    uavs: Sequence[Uav],
    beta: float,
    d: float,
    metric: Metric,
    deadline: float,
    tol: float,
) -> tuple[bool, list[tuple[Uav, float]], dict[int, Optional[tuple[float, float]]], float]:
    """Greedy left-to-right feasibility sweep over ``uavs`` in the given
    order. Returns (feasible, placed [(agent, y)...], reach windows,
    covered prefix). The prefix is maximal for this order."""
    frontier = 0.0
    placed: list[tuple[Uav, float]] = []
    reach: dict[int, Optional[tuple[float, float]]] = {}
    feasible = False
    for u in uavs:
        m = horizontal_reach(u, deadline, metric)
        if m is None:
            reach[u.id] = None
            continue
        w = footprint_halfwidth(u, d)
        a = u.x - w - m
        b = u.x + w + m
        reach[u.id] = (a, b)
        if feasible:
            continue
        if frontier < a - tol or frontier > b + tol:
            continue
        y = min(frontier + w, b - w)
        # Undo any earlier agent this one strictly overtakes; its interval
        # is contained in ours, so coverage of the prefix survives.
        while placed and placed[-1][1] > y + tol:
            placed.pop()
        placed.append((u, y))
        if y + w > frontier:
            frontier = y + w
        if frontier >= beta - tol:
            feasible = True
    return feasible, placed, reach, frontier


def check_feasibility(instance: Instance, deadline: float) -> FeasibilityOutcome:
    """Can the fleet reach full coverage within ``deadline`` while keeping
    its initial left-to-right order? Optimal for that question in O(n^2)."""
    instance.require_strip_coverable()
    feasible, placed, reach, prefix = sweep_order(
        instance.uavs, instance.beta, instance.d, instance.metric, deadline, instance.geom_tol
    )
    zp = 0.0 if instance.has_offsets else None
    placements = tuple(Placement(u.id, y, zp) for u, y in placed) if feasible else ()
    return FeasibilityOutcome(feasible=feasible, placements=placements, reach=reach, prefix=prefix)


# ---------------------------------------------------------------------------
# Exact solver for a shared origin
# ---------------------------------------------------------------------------


def _greedy_minmax_core(
    uavs: Sequence[Uav], beta: float, d: float, metric: Metric, origin: float
) -> list[tuple[Uav, float]]:
    """Greedy far-frontier dispatch in local coordinates with the shared
    origin at ``origin <= 0``. Returns [(agent, y)] placements.

    Each round sends the available agent whose travel time to the frontier
    slot is smallest. The slot is ``max(frontier - w, origin)``: covering
    the frontier never warrants flying past it, and an agent large enough
    to finish from home just rises in place.
    """
    tol = geom_tol(beta)
    frontier = beta
    available = list(uavs)
    placed: list[tuple[Uav, float]] = []
    while frontier > tol:
        if not available:
            raise InfeasibleError("agents exhausted with %.6g km uncovered" % frontier)
        best = None
        for u in available:
            w = footprint_halfwidth(u, d)
            y = max(frontier - w, origin)
            t = travel_time(u, y, metric)
            if best is None or (t, u.id) < (best[0], best[1].id):
                best = (t, u, y, w)
        _, u, y, w = best
        available.remove(u)
        placed.append((u, y))
        frontier = y - w
    return placed


def solve_common_origin_minmax(instance: Instance, split_limit: int = 12) -> MinMaxSolution:
    """Exact min-max deployment for a fleet sharing one initial abscissa.

    Origins left of the target (x <= 0) are solved directly, origins right
    of it by mirroring. For an origin strictly inside the target the fleet
    is exhaustively split into a left and a right group (up to
    ``split_limit`` agents), matching the two-subinterval prescription.
    """
    instance.require_strip_coverable()
    x0 = common_origin(instance)
    tol = instance.geom_tol
    if x0 <= tol:
        placed = _greedy_minmax_core(instance.uavs, instance.beta, instance.d, instance.metric, min(x0, 0.0))
        return _finish_minmax(instance, placed)
    if x0 >= instance.beta - tol:
        mirrored = reflect_instance(instance)
        placed = _greedy_minmax_core(
            mirrored.uavs, instance.beta, instance.d, instance.metric, min(instance.beta - x0, 0.0)
        )
        back = [(instance.by_id(u.id), instance.beta - y) for u, y in placed]
        return _finish_minmax(instance, back)
    return _solve_interior_split(instance, x0, split_limit)


def _finish_minmax(instance: Instance, placed: list[tuple[Uav, float]]) -> MinMaxSolution:
    zp = 0.0 if instance.has_offsets else None
    placements = [Placement(u.id, y, zp) for u, y in placed]
    deployment = Deployment.build(instance, placements)
    return MinMaxSolution(deployment=deployment, objective=deployment.max_delay, method="common_origin_exact")


def _solve_interior_split(instance: Instance, x0: float, split_limit: int) -> MinMaxSolution:
    n = instance.n
    if n > split_limit:
        raise UnsupportedError(
            f"shared origin strictly inside the target needs a fleet split; "
            f"exhaustive splitting is limited to {split_limit} agents (got {n})"
        )
    left_len = x0
    right_len = instance.beta - x0
    best: Optional[tuple[float, list[tuple[Uav, float]]]] = None
    for mask in range(1 << n):
        left = [u for k, u in enumerate(instance.uavs) if mask >> k & 1]
        right = [u for k, u in enumerate(instance.uavs) if not mask >> k & 1]
        try:
            placed: list[tuple[Uav, float]] = []
            # Left side: target [0, x0] with the origin at its right end;
            # mirror into origin-at-left coordinates.
            if left:
                local = [Uav(u.id, 0.0, u.r, u.h, u.v, u.z) for u in left]
                got = _greedy_minmax_core(local, left_len, instance.d, instance.metric, 0.0)
                placed += [(instance.by_id(u.id), x0 - y) for u, y in got]
            elif left_len > instance.geom_tol:
                continue
            # Right side: target [x0, beta], origin at its left end.
            if right:
                local = [Uav(u.id, 0.0, u.r, u.h, u.v, u.z) for u in right]
                got = _greedy_minmax_core(local, right_len, instance.d, instance.metric, 0.0)
                placed += [(instance.by_id(u.id), x0 + y) for u, y in got]
            elif right_len > instance.geom_tol:
                continue
        except InfeasibleError:
            continue
        objective = max(travel_time(u, y, instance.metric) for u, y in placed)
        if best is None or objective < best[0]:
            best = (objective, placed)
    if best is None:
        raise InfeasibleError("no left/right fleet split covers both subintervals")
    return _finish_minmax(instance, best[1])


# ---------------------------------------------------------------------------
# FPTAS for dispersed fleets
# ---------------------------------------------------------------------------


def effective_grid_floor(t_l: float, t_u: float, epsilon: float) -> float:
    """Grid base: t_l, unless zero-altitude agents drive it to 0, in which
    case a tiny fraction of t_u stands in so the grid stays finite."""
    return max(t_l, epsilon * t_u * 1e-6)


def fptas_minmax(instance: Instance, epsilon: float) -> MinMaxSolution:
    """(1+epsilon)-optimal min-max deployment under order preservation.

    Bisects the deadline grid {k * epsilon * t_l} between the bounds and
    returns the smallest feasible grid deadline; the reported objective is
    that deadline, while the deployment carries the recomputed travel
    times of the witness placement.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be > 0")
    instance.require_strip_coverable()
    b = bounds(instance)
    zero = check_feasibility(instance, 0.0)
    if zero.feasible:
        deployment = Deployment.build(instance, zero.placements)
        return MinMaxSolution(deployment, 0.0, "fptas", epsilon, 0.0)
    step = epsilon * effective_grid_floor(b.t_l, b.t_u, epsilon)
    hi = max(1, math.ceil(b.t_u / step))
    top = check_feasibility(instance, hi * step)
    if not top.feasible:
        raise InfeasibleError("instance infeasible even at the upper deadline bound")
    lo = 0  # deadline 0 is known infeasible
    witness = top
    while hi - lo > 1:
        mid = (lo + hi) // 2
        probe = check_feasibility(instance, mid * step)
        if probe.feasible:
            hi = mid
            witness = probe
        else:
            lo = mid
    deployment = Deployment.build(instance, witness.placements)
    return MinMaxSolution(
        deployment=deployment,
        objective=hi * step,
        method="fptas",
        epsilon=epsilon,
        grid_step=step,
    )
