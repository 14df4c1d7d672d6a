"""Exact oracles for desk-scale instances.

These are the reference answers the fast solvers are tested against:

* ``brute_force_minmax`` -- exact optimum of the unrestricted min-max
  problem. A deployment induces some final left-to-right order, so the
  optimum is the best over all orders; a subset dynamic program computes
  the longest coverable prefix over every agent subset (equivalent to
  enumerating permutations, exponentially cheaper), wrapped in a
  high-precision deadline bisection.
* ``bisect_order_minmax`` -- continuous optimum of the order-preserving
  min-max problem via 1e-12 bisection over the feasibility sweep.
* ``brute_force_minsum`` -- best total delay over all distinct dispatch
  orders, each solved by the budget DP on successively halved grids.
* ``continuous_order_minsum`` -- continuous optimum of the
  order-preserving min-sum problem by convex minimization over every
  usable subset chain (independent of the DP).
* ``has_three_partition`` -- exhaustive triple-partition checker for the
  hard-instance gadgets.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np
from scipy.optimize import minimize

from .errors import InfeasibleError, OracleSizeError
from .minmax import sweep_order
from .minsum import _dp_core
from .model import (
    Deployment,
    Instance,
    Placement,
    Uav,
    bounds,
    footprint_halfwidth,
    horizontal_reach,
    travel_time,
)

# ---------------------------------------------------------------------------
# Unrestricted min-max via subset DP + bisection
# ---------------------------------------------------------------------------


def _subset_windows(instance: Instance, deadline: float):
    lows, highs, widths = [], [], []
    for u in instance.uavs:
        w = footprint_halfwidth(u, instance.d)
        m = horizontal_reach(u, deadline, instance.metric)
        if m is None:
            lows.append(math.inf)
            highs.append(-math.inf)
        else:
            lows.append(u.x - w - m)
            highs.append(u.x + w + m)
        widths.append(2.0 * w)
    return lows, highs, widths


def _subset_prefixes(instance: Instance, deadline: float, early_exit: bool):
    """F[mask] = longest coverable left-aligned prefix using the agents in
    ``mask`` (any final order). choice[mask] records the maximizing agent.

    Windows are exact (no geometric slack): the oracle brackets the true
    optimum, so any relaxation would bias the bisection measurably."""
    n = instance.n
    tol = 0.0
    beta = instance.beta
    lows, highs, widths = _subset_windows(instance, deadline)
    size = 1 << n
    F = [0.0] * size
    choice = [-1] * size
    for mask in range(1, size):
        best = 0.0
        arg = -1
        rest = mask
        while rest:
            low_bit = rest & -rest
            i = low_bit.bit_length() - 1
            rest ^= low_bit
            prev = F[mask ^ low_bit]
            if prev >= lows[i] - tol and prev <= highs[i] + tol:
                cand = min(highs[i], prev + widths[i])
                if cand < prev:
                    cand = prev
            else:
                cand = prev
            if cand > best:
                best = cand
                arg = i
        F[mask] = best
        choice[mask] = arg
        if early_exit and best >= beta - tol:
            return F, choice, True
    return F, choice, F[size - 1] >= beta - tol


def _unrestricted_feasible(instance: Instance, deadline: float) -> bool:
    return _subset_prefixes(instance, deadline, early_exit=True)[2]


def _extract_unrestricted(instance: Instance, deadline: float) -> Deployment:
    F, choice, ok = _subset_prefixes(instance, deadline, early_exit=False)
    if not ok:
        raise InfeasibleError("extraction requested at an infeasible deadline")
    lows, highs, widths = _subset_windows(instance, deadline)
    mask = (1 << instance.n) - 1
    rev: list[tuple[int, float]] = []
    while mask:
        i = choice[mask]
        if i < 0:
            break
        prev = F[mask ^ (1 << i)]
        if F[mask] > prev:  # the agent really extended the prefix
            y = min(highs[i] - 0.5 * widths[i], prev + 0.5 * widths[i])
            rev.append((i, y))
        mask ^= 1 << i
    zp = 0.0 if instance.has_offsets else None
    placements = [Placement(instance.uavs[i].id, y, zp) for i, y in reversed(rev)]
    return Deployment.build(instance, placements)


def brute_force_minmax(
    instance: Instance, max_n: int = 8, rel_tol: float = 1e-12
) -> tuple[float, Deployment]:
    """Exact optimum of the unrestricted min-max problem for n <= max_n."""
    if instance.n > max_n:
        raise OracleSizeError(f"min-max oracle is limited to {max_n} agents (got {instance.n})")
    instance.require_strip_coverable()
    if _unrestricted_feasible(instance, 0.0):
        return 0.0, _extract_unrestricted(instance, 0.0)
    hi = bounds(instance).t_u
    if not _unrestricted_feasible(instance, hi):
        raise InfeasibleError("instance infeasible even at the upper deadline bound")
    lo = 0.0
    while hi - lo > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        if _unrestricted_feasible(instance, mid):
            hi = mid
        else:
            lo = mid
    return hi, _extract_unrestricted(instance, hi)


def bisect_order_minmax(instance: Instance, rel_tol: float = 1e-12) -> float:
    """Continuous optimum of the order-preserving min-max problem."""
    instance.require_strip_coverable()
    tol = instance.geom_tol

    def feasible(t: float) -> bool:
        return sweep_order(instance.uavs, instance.beta, instance.d, instance.metric, t, tol)[0]

    if feasible(0.0):
        return 0.0
    hi = bounds(instance).t_u
    if not feasible(hi):
        raise InfeasibleError("instance infeasible even at the upper deadline bound")
    lo = 0.0
    while hi - lo > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            hi = mid
        else:
            lo = mid
    return hi


# ---------------------------------------------------------------------------
# Order enumeration
# ---------------------------------------------------------------------------


def distinct_orders(uavs: Sequence[Uav]) -> Iterator[tuple[Uav, ...]]:
    """All dispatch orders, collapsing agents with identical physics."""

    def signature(u: Uav):
        return (u.x, u.r, u.h, u.v, u.z)

    keys = sorted({signature(u) for u in uavs})
    grouped = {k: [u for u in uavs if signature(u) == k] for k in keys}
    counts = {k: len(grouped[k]) for k in keys}
    cursor = {k: 0 for k in keys}
    seq: list[Uav] = []
    n = len(uavs)

    def rec() -> Iterator[tuple[Uav, ...]]:
        if len(seq) == n:
            yield tuple(seq)
            return
        for k in keys:
            if counts[k]:
                counts[k] -= 1
                seq.append(grouped[k][cursor[k]])
                cursor[k] += 1
                yield from rec()
                cursor[k] -= 1
                seq.pop()
                counts[k] += 1

    yield from rec()


def order_feasibility(
    instance: Instance, order: Sequence[Uav], deadline: float
) -> tuple[bool, list[tuple[Uav, float]]]:
    """Feasibility sweep for one explicit dispatch order."""
    feasible, placed, _, _ = sweep_order(
        order, instance.beta, instance.d, instance.metric, deadline, instance.geom_tol
    )
    return feasible, placed


def exists_order_feasible(
    instance: Instance, deadline: float, max_n: int = 9
) -> Optional[list[tuple[Uav, float]]]:
    """Search all distinct dispatch orders for one that covers the target
    within ``deadline``; returns its placements or None. This is the
    unrestricted feasibility question the hardness gadgets encode."""
    if instance.n > max_n:
        raise OracleSizeError(f"order enumeration is limited to {max_n} agents (got {instance.n})")
    for order in distinct_orders(instance.uavs):
        feasible, placed = order_feasibility(instance, order, deadline)
        if feasible:
            return placed
    return None


# ---------------------------------------------------------------------------
# Min-sum oracles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MinSumOracleResult:
    """Best total delay over all dispatch orders, with the residual grid
    slack of the refinement (the truth lies within n*grid_unit below)."""

    objective: float
    order: tuple[int, ...]
    grid_unit: float
    converged: bool


def brute_force_minsum(
    instance: Instance,
    max_n: int = 6,
    initial_steps: int = 64,
    refine_levels: int = 5,
    rel_tol: float = 1e-3,
) -> MinSumOracleResult:
    """Enumerate distinct dispatch orders; solve each by the budget DP on
    successively halved grids until the objective settles."""
    if instance.n > max_n:
        raise OracleSizeError(f"min-sum oracle is limited to {max_n} agents (got {instance.n})")
    instance.require_strip_coverable()
    gamma_u = bounds(instance).gamma_u
    best: Optional[tuple[float, tuple[int, ...], float, bool]] = None
    for order in distinct_orders(instance.uavs):
        delta = gamma_u / initial_steps
        prev = None
        converged = False
        val = math.inf
        for _ in range(refine_levels):
            jstar, _, _ = _dp_core(order, instance.beta, instance.d, instance.metric, delta, gamma_u)
            if jstar is None:
                raise InfeasibleError("budget grid exhausted inside the oracle")
            val = jstar * delta
            if prev is not None and abs(prev - val) <= rel_tol * max(1.0, val):
                converged = True
                break
            prev = val
            delta /= 2.0
        if best is None or val < best[0]:
            best = (val, tuple(u.id for u in order), delta, converged)
    assert best is not None
    return MinSumOracleResult(
        objective=best[0], order=best[1], grid_unit=best[2], converged=best[3]
    )


def continuous_order_minsum(instance: Instance, max_n: int = 5) -> float:
    """Continuous optimum of the order-preserving min-sum problem.

    For every subset with enough total footprint, minimize the summed
    travel times subject to the seam chain (first interval reaches 0,
    consecutive intervals touch, last reaches beta) and the index order.
    The objective is convex and the constraints linear, so the local
    optimizer is exact per subset; the answer is the best over subsets.
    """
    if instance.n > max_n:
        raise OracleSizeError(
            f"continuous min-sum oracle is limited to {max_n} agents (got {instance.n})"
        )
    instance.require_strip_coverable()
    uavs = instance.uavs
    beta = instance.beta
    tol = instance.geom_tol
    best = math.inf
    for mask in range(1, 1 << instance.n):
        subset = [u for k, u in enumerate(uavs) if mask >> k & 1]
        ws = [footprint_halfwidth(u, instance.d) for u in subset]
        if 2.0 * sum(ws) < beta - tol:
            continue
        k = len(subset)

        def objective(y, subset=subset):
            return sum(travel_time(u, yi, instance.metric) for u, yi in zip(subset, y))

        cons = []
        cons.append({"type": "ineq", "fun": lambda y, w0=ws[0]: w0 - y[0]})
        for idx in range(1, k):
            cons.append(
                {
                    "type": "ineq",
                    "fun": lambda y, i=idx: y[i - 1] + ws[i - 1] - (y[i] - ws[i]),
                }
            )
            cons.append({"type": "ineq", "fun": lambda y, i=idx: y[i] - y[i - 1]})
        cons.append({"type": "ineq", "fun": lambda y: y[-1] + ws[-1] - beta})
        # Start from the tight tiling, which always satisfies the chain.
        x0 = []
        edge = 0.0
        for w in ws:
            x0.append(edge + w)
            edge += 2.0 * w
        res = minimize(
            objective,
            np.array(x0),
            method="SLSQP",
            constraints=cons,
            options={"ftol": 1e-12, "maxiter": 500},
        )
        if res.success and res.fun < best:
            best = float(res.fun)
    if not math.isfinite(best):
        raise InfeasibleError("no subset admits a continuous chain cover")
    return best


# ---------------------------------------------------------------------------
# 3-partition checker
# ---------------------------------------------------------------------------


def has_three_partition(
    values: Sequence[int], max_m: int = 4
) -> Optional[tuple[tuple[int, int, int], ...]]:
    """Exhaustively partition ``values`` into triples of equal sum B.

    Returns one partition (as value triples) or None. Limited to m <= max_m
    triples."""
    vals = sorted(values, reverse=True)
    if len(vals) % 3 != 0:
        return None
    m = len(vals) // 3
    if m > max_m:
        raise OracleSizeError(f"partition checker is limited to {max_m} triples (got {m})")
    total = sum(vals)
    if total % m != 0:
        return None
    target = total // m

    def rec(remaining: tuple[int, ...]) -> Optional[list[tuple[int, int, int]]]:
        if not remaining:
            return []
        first = remaining[0]
        rest = remaining[1:]
        seen = set()
        for j, k in itertools.combinations(range(len(rest)), 2):
            pair = (rest[j], rest[k])
            if pair in seen:
                continue
            seen.add(pair)
            if first + pair[0] + pair[1] == target:
                nxt = list(rest)
                for idx in sorted((j, k), reverse=True):
                    del nxt[idx]
                sub = rec(tuple(nxt))
                if sub is not None:
                    return [(first, pair[0], pair[1])] + sub
        return None

    got = rec(tuple(vals))
    return tuple(got) if got is not None else None
