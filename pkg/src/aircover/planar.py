"""2D rectangular targets: grid decomposition and the 2D deadline FPTAS.

The rectangle is padded up to p x q squares of side sqrt(2) * r_eff, the
largest square a disk of radius r_eff covers. Columns are filled left to
right with consecutive agent segments; within a column the q square
centers form a 1D covering target along the lateral axis, and the agent's
usable lateral budget within a deadline is what remains of its travel
budget after paying for altitude and for reaching the column's abscissa.
Equal-size square footprints can only contain their grid square when the
agent hovers exactly over the square center, so the per-column assignment
is a first-fit march of the segment over the ascending centers.

Heterogeneous fleets are handled by shrinking every radius to the fleet
minimum; re-verification against the true radii can only succeed more.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import InfeasibleError, InvalidInstanceError
from .model import (
    Deployment,
    Instance,
    Placement,
    Uav,
    travel_time_to,
)
from .minmax import effective_grid_floor


@dataclass(frozen=True)
class GridPlan:
    """Grid decomposition: p columns of q squares of side sqrt(2)*r_eff.
    ``segments`` lists, per column, the (first agent index, length) of the
    consecutive fleet slice committed to it."""

    p: int
    q: int
    r_eff: float
    square_side: float
    segments: tuple[tuple[int, int], ...] = ()

    def column_x(self, col: int) -> float:
        return (col + 0.5) * self.square_side

    def center_z(self, row: int) -> float:
        return (row + 0.5) * self.square_side


@dataclass(frozen=True)
class PlanarOutcome:
    feasible: bool
    placements: tuple[Placement, ...]
    plan: GridPlan


@dataclass(frozen=True)
class PlanarSolution:
    deployment: Deployment
    objective: float
    plan: GridPlan
    epsilon: float
    grid_step: float


def _effective_radius(instance: Instance, r_eff: Optional[float]) -> float:
    r_min = min(u.r for u in instance.uavs)
    if r_eff is None:
        return r_min
    if r_eff <= 0 or r_eff > r_min + instance.geom_tol:
        raise InvalidInstanceError(
            f"effective radius must lie in (0, min radius {r_min:.6g}]"
        )
    return min(r_eff, r_min)


def make_grid(instance: Instance, r_eff: Optional[float] = None) -> GridPlan:
    """Pad the rectangle to whole squares of side sqrt(2) * r_eff."""
    if instance.d <= 0:
        raise InvalidInstanceError("a planar grid needs a target width d > 0")
    r = _effective_radius(instance, r_eff)
    side = math.sqrt(2.0) * r
    tol = instance.geom_tol
    p = max(1, math.ceil(instance.beta / side - tol))
    q = max(1, math.ceil(instance.d / side - tol))
    return GridPlan(p=p, q=q, r_eff=r, square_side=side)


def _lateral_reach(u: Uav, deadline: float, dx: float, metric: str) -> Optional[float]:
    """Lateral movement budget once altitude and the column abscissa are
    paid for; None when the column is out of reach."""
    if deadline < 0.0:
        return None
    if metric == "manhattan":
        slack = u.v * deadline - u.h - abs(dx)
        return slack if slack >= 0.0 else None
    budget = (u.v * deadline) ** 2 - u.h**2 - dx**2
    if budget < 0.0:
        return None
    return math.sqrt(budget)


def _assign_column(
    segment: Sequence[Uav],
    centers: Sequence[float],
    col_x: float,
    deadline: float,
    metric: str,
    tol: float,
) -> Optional[list[tuple[Uav, float]]]:
    """First-fit march: each ascending center takes the earliest remaining
    agent that can hover over it within the deadline. Skipped agents stay
    unused; order along the lateral axis is preserved by construction."""
    out: list[tuple[Uav, float]] = []
    ptr = 0
    for c in centers:
        found = None
        while ptr < len(segment):
            u = segment[ptr]
            ptr += 1
            lat = _lateral_reach(u, deadline, col_x - u.x, metric)
            if lat is not None and abs(c - u.z) <= lat + tol:
                found = (u, c)
                break
        if found is None:
            return None
        out.append(found)
    return out


def check_feasibility_2d(
    instance: Instance, deadline: float, r_eff: Optional[float] = None
) -> PlanarOutcome:
    """Column-by-column feasibility for the gridded rectangle.

    Each column tries segment lengths from q up to what the remaining
    columns can spare; the first feasible length commits the whole
    segment (skipped members included)."""
    plan = make_grid(instance, r_eff)
    n = instance.n
    if plan.p * plan.q > n:
        raise InfeasibleError(
            f"grid needs {plan.p * plan.q} agents but the fleet has {n} (pigeonhole)"
        )
    tol = instance.geom_tol
    centers = [plan.center_z(k) for k in range(plan.q)]
    consumed = 0
    segments: list[tuple[int, int]] = []
    placements: list[Placement] = []
    for col in range(plan.p):
        col_x = plan.column_x(col)
        remaining_cols = plan.p - 1 - col
        j_max = n - consumed - remaining_cols * plan.q
        committed = None
        for j in range(plan.q, j_max + 1):
            segment = instance.uavs[consumed : consumed + j]
            assign = _assign_column(segment, centers, col_x, deadline, instance.metric, tol)
            if assign is not None:
                committed = (j, assign)
                break
        if committed is None:
            return PlanarOutcome(False, (), GridPlan(plan.p, plan.q, plan.r_eff, plan.square_side, tuple(segments)))
        j, assign = committed
        segments.append((consumed, j))
        placements.extend(Placement(u.id, col_x, c) for u, c in assign)
        consumed += j
    final = GridPlan(plan.p, plan.q, plan.r_eff, plan.square_side, tuple(segments))
    return PlanarOutcome(True, tuple(placements), final)


def _bounds_2d(instance: Instance, plan: GridPlan) -> tuple[float, float]:
    """Deadline bounds for the gridded problem: pure ascent below, travel
    to the farthest padded-grid corner above."""
    t_l = min(u.h / u.v for u in instance.uavs)
    corners = [
        (0.0, 0.0),
        (plan.p * plan.square_side, 0.0),
        (0.0, plan.q * plan.square_side),
        (plan.p * plan.square_side, plan.q * plan.square_side),
    ]
    t_u = max(
        max(travel_time_to(u, cx, cz, instance.metric) for cx, cz in corners)
        for u in instance.uavs
    )
    return t_l, t_u


def fptas_minmax_2d(
    instance: Instance, epsilon: float, r_eff: Optional[float] = None
) -> PlanarSolution:
    """(1+epsilon)-optimal deadline for the gridded 2D deployment, by the
    same grid bisection as the 1D scheme over the column feasibility
    check. O(n^3 log(1/epsilon))."""
    if epsilon <= 0:
        raise ValueError("epsilon must be > 0")
    plan = make_grid(instance, r_eff)
    t_l, t_u = _bounds_2d(instance, plan)
    zero = check_feasibility_2d(instance, 0.0, plan.r_eff)
    if zero.feasible:
        deployment = Deployment.build(instance, zero.placements)
        return PlanarSolution(deployment, 0.0, zero.plan, epsilon, 0.0)
    step = epsilon * effective_grid_floor(t_l, t_u, epsilon)
    hi = max(1, math.ceil(t_u / step))
    top = check_feasibility_2d(instance, hi * step, plan.r_eff)
    if not top.feasible:
        raise InfeasibleError("2D instance infeasible even at the upper deadline bound")
    lo = 0
    witness = top
    while hi - lo > 1:
        mid = (lo + hi) // 2
        probe = check_feasibility_2d(instance, mid * step, plan.r_eff)
        if probe.feasible:
            hi = mid
            witness = probe
        else:
            lo = mid
    deployment = Deployment.build(instance, witness.placements)
    return PlanarSolution(
        deployment=deployment,
        objective=hi * step,
        plan=witness.plan,
        epsilon=epsilon,
        grid_step=step,
    )


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------


def verify_square_containment(
    instance: Instance,
    placements: Sequence[Placement],
    plan: GridPlan,
    true_radii: bool = False,
) -> bool:
    """Each dispatched agent's square footprint must contain the grid
    square it is posted on (the nearest square to its final position).

    With the effective-radius view the footprint and the grid square have
    equal side, so containment means exact centering; true radii leave
    (r - r_eff) * sqrt(2)/2 of slack per axis."""
    tol = instance.geom_tol
    side = plan.square_side
    for p in placements:
        if p.zp is None:
            return False
        u = instance.by_id(p.uav_id)
        r = u.r if true_radii else plan.r_eff
        half = math.sqrt(2.0) / 2.0 * r
        col = min(plan.p - 1, max(0, int(p.y // side)))
        row = min(plan.q - 1, max(0, int(p.zp // side)))
        cx = plan.column_x(col)
        cz = plan.center_z(row)
        if abs(p.y - cx) > half - side / 2.0 + tol:
            return False
        if abs(p.zp - cz) > half - side / 2.0 + tol:
            return False
    return True


def verify_planar_coverage(instance: Instance, placements: Sequence[Placement]) -> bool:
    """True iff the union of the agents' (true-radius) square footprints
    covers the rectangle [0, beta] x [0, d], by an exact slab sweep."""
    tol = instance.geom_tol
    squares = []
    for p in placements:
        if p.zp is None:
            return False
        u = instance.by_id(p.uav_id)
        half = math.sqrt(2.0) / 2.0 * u.r
        squares.append((p.y - half, p.y + half, p.zp - half, p.zp + half))
    if not squares:
        return False
    cuts = {0.0, instance.beta}
    for x0, x1, _, _ in squares:
        for c in (x0, x1):
            if 0.0 < c < instance.beta:
                cuts.add(c)
    xs = sorted(cuts)
    for x0, x1 in zip(xs, xs[1:]):
        mid = 0.5 * (x0 + x1)
        spans = sorted(
            (z0, z1) for sx0, sx1, z0, z1 in squares if sx0 <= mid <= sx1
        )
        covered = 0.0
        for z0, z1 in spans:
            if z0 > covered + tol:
                return False
            if z1 > covered:
                covered = z1
            if covered >= instance.d - tol:
                break
        if covered < instance.d - tol:
            return False
    return True
