"""Core geometry, link budget and travel-time arithmetic for aerial coverage.

Units are kilometers and hours end to end. A fleet of aerial agents must
hover over a thin rectangular strip of length ``beta`` and width ``d`` so
that the union of their coverage footprints contains it. With ``d == 0``
the target is the line interval ``[0, beta]``; an agent hovering at
abscissa ``y`` and altitude ``h`` with radius ``r`` then covers
``[y - w, y + w]`` where ``w = sqrt(r**2 - (d/2)**2)`` is the footprint
half-width along the length axis.

All types are immutable values and all operations are pure functions, so
everything here is safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Mapping, Optional, Sequence

from .errors import DomainError, InfeasibleError, InvalidInstanceError

Metric = Literal["euclidean", "manhattan"]

#: Relative scale for geometric tolerances; all "covers point" and gap
#: checks use geom_tol(beta) so seam points never flip on float noise.
GEOM_TOL_SCALE = 1e-9


def geom_tol(beta: float) -> float:
    """Global geometric tolerance for an instance of length ``beta``."""
    return GEOM_TOL_SCALE * max(beta, 1.0)


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Uav:
    """One agent: initial ground position, coverage radius, altitude, speed.

    ``x`` is the abscissa along the target axis (km), ``z`` the lateral
    offset off that axis (km, 0 for purely 1D fleets), ``r`` the coverage
    radius (km), ``h`` the operating altitude (km) and ``v`` the flying
    speed (km/h).
    """

    id: int
    x: float
    r: float
    h: float
    v: float
    z: float = 0.0

    def __post_init__(self) -> None:
        if self.v <= 0:
            raise InvalidInstanceError(f"agent {self.id}: speed must be > 0 (got {self.v})")
        if self.h < 0:
            raise InvalidInstanceError(f"agent {self.id}: altitude must be >= 0 (got {self.h})")
        if self.r <= 0:
            raise InvalidInstanceError(f"agent {self.id}: radius must be > 0 (got {self.r})")


@dataclass(frozen=True)
class RadioParams:
    """Link-budget parameters: transmit power, reference channel gain,
    noise power and the linear SNR threshold.

    ``power`` is per-agent; it may be None on an instance-level record that
    only carries the shared channel constants.
    """

    xi: float
    sigma2: float
    gamma_th: float
    power: Optional[float] = None

    def __post_init__(self) -> None:
        for name in ("xi", "sigma2", "gamma_th"):
            if getattr(self, name) <= 0:
                raise InvalidInstanceError(f"radio parameter {name} must be > 0")
        if self.power is not None and self.power <= 0:
            raise InvalidInstanceError("radio parameter power must be > 0")

    def with_power(self, power: float) -> "RadioParams":
        return RadioParams(self.xi, self.sigma2, self.gamma_th, power)


@dataclass(frozen=True)
class Instance:
    """Target geometry plus the agent fleet.

    Agents are kept sorted by (x, r, id); ties in x are refined by radius
    so that co-located agents appear in ascending radius order, which is
    the least restrictive reading of order preservation for shared-origin
    fleets.
    """

    beta: float
    d: float
    uavs: tuple[Uav, ...]
    radio: Optional[RadioParams] = None
    metric: Metric = "euclidean"

    def __post_init__(self) -> None:
        if self.beta <= 0:
            raise InvalidInstanceError(f"target length beta must be > 0 (got {self.beta})")
        if self.d < 0:
            raise InvalidInstanceError(f"target width d must be >= 0 (got {self.d})")
        if self.metric not in ("euclidean", "manhattan"):
            raise InvalidInstanceError(f"unknown metric {self.metric!r}")
        if not self.uavs:
            raise InvalidInstanceError("instance needs at least one agent")
        fleet = tuple(sorted(self.uavs, key=lambda u: (u.x, u.r, u.id)))
        object.__setattr__(self, "uavs", fleet)
        ids = [u.id for u in fleet]
        if len(set(ids)) != len(ids):
            raise InvalidInstanceError("agent ids must be unique")
        if self.d == 0.0:
            # Line-interval case: the chord precondition is unambiguous.
            if 2.0 * sum(u.r for u in fleet) < self.beta - geom_tol(self.beta):
                raise InfeasibleError(
                    "total coverage 2*sum(r) = %.6g is below target length %.6g"
                    % (2.0 * sum(u.r for u in fleet), self.beta)
                )
        # For d > 0 the precondition depends on how the instance is solved
        # (1D strip reduction vs. 2D grid), so the solvers check it.

    @property
    def n(self) -> int:
        return len(self.uavs)

    @property
    def geom_tol(self) -> float:
        return geom_tol(self.beta)

    @property
    def has_offsets(self) -> bool:
        return any(u.z != 0.0 for u in self.uavs)

    def by_id(self, uav_id: int) -> Uav:
        for u in self.uavs:
            if u.id == uav_id:
                return u
        raise InvalidInstanceError(f"unknown agent id {uav_id}")

    def require_strip_coverable(self) -> None:
        """Check the 1D-reduction precondition (enough total footprint)."""
        total = 0.0
        for u in self.uavs:
            total += 2.0 * footprint_halfwidth(u, self.d)
        if total < self.beta - self.geom_tol:
            raise InfeasibleError(
                "total footprint %.6g is below target length %.6g" % (total, self.beta)
            )


@dataclass(frozen=True)
class BoundReport:
    """Delay bounds and heterogeneity ratios for one instance.

    ``t_l``/``t_u`` bracket the optimal per-agent deadline, ``gamma_u``
    bounds any total delay, ``kappa``/``tau`` are the altitude and speed
    spread ratios (h_max/h_min, v_max/v_min).
    """

    t_l: float
    t_u: float
    gamma_u: float
    kappa: float
    tau: float


@dataclass(frozen=True)
class Placement:
    """Final position of one dispatched agent. ``zp`` is the lateral
    coordinate for planar targets; None for line targets."""

    uav_id: int
    y: float
    zp: Optional[float] = None


@dataclass(frozen=True)
class Deployment:
    """Final positions plus per-agent travel times for the dispatched
    subset. Unused agents stay at their initial location with zero delay."""

    placements: tuple[Placement, ...]
    per_delay: Mapping[int, float]
    max_delay: float
    total_delay: float
    used: frozenset[int]

    @classmethod
    def build(cls, instance: Instance, placements: Sequence[Placement]) -> "Deployment":
        delays: dict[int, float] = {}
        for p in placements:
            u = instance.by_id(p.uav_id)
            if p.zp is None:
                delays[p.uav_id] = travel_time(u, p.y, instance.metric)
            else:
                delays[p.uav_id] = travel_time_to(u, p.y, p.zp, instance.metric)
        return cls(
            placements=tuple(placements),
            per_delay=delays,
            max_delay=max(delays.values(), default=0.0),
            total_delay=sum(delays.values()),
            used=frozenset(delays),
        )


# ---------------------------------------------------------------------------
# Travel time and reach
# ---------------------------------------------------------------------------


def travel_time(uav: Uav, y: float, metric: Metric = "euclidean", planar: bool = True) -> float:
    """Time for ``uav`` to fly from (x, z, 0) and hover at (y, 0, h).

    Euclidean: sqrt((y-x)^2 + z^2 + h^2) / v. Manhattan: (|y-x| + |z| + h) / v.
    With ``planar=False`` the lateral offset z is ignored (strict 1D form).
    """
    dz = uav.z if planar else 0.0
    if metric == "manhattan":
        return (abs(y - uav.x) + abs(dz) + uav.h) / uav.v
    return math.hypot(y - uav.x, dz, uav.h) / uav.v


def travel_time_to(uav: Uav, y: float, zp: float, metric: Metric = "euclidean") -> float:
    """Time to hover at an arbitrary planar point (y, zp, h)."""
    if metric == "manhattan":
        return (abs(y - uav.x) + abs(zp - uav.z) + uav.h) / uav.v
    return math.hypot(y - uav.x, zp - uav.z, uav.h) / uav.v


def horizontal_reach(uav: Uav, deadline: float, metric: Metric = "euclidean") -> Optional[float]:
    """Largest horizontal displacement along the target axis that fits in
    ``deadline``, or None when the agent cannot even reach its altitude
    (grounded). The lateral offset z is paid for on the way."""
    if deadline < 0.0:
        return None
    if metric == "manhattan":
        slack = uav.v * deadline - uav.h - abs(uav.z)
        return slack if slack >= 0.0 else None
    budget = (uav.v * deadline) ** 2 - uav.h**2 - uav.z**2
    if budget < 0.0:
        return None
    return math.sqrt(budget)


# ---------------------------------------------------------------------------
# Link budget and footprint
# ---------------------------------------------------------------------------


def radius_from_snr(radio: RadioParams, h: float) -> float:
    """Coverage radius at altitude ``h`` from the link budget:
    sqrt(P*xi / (gamma_th * sigma2) - h^2).

    Raises DomainError when the radicand is not positive (the altitude is
    too high for the link budget)."""
    if radio.power is None:
        raise InvalidInstanceError("radius derivation needs a transmit power")
    radicand = radio.power * radio.xi / (radio.gamma_th * radio.sigma2) - h * h
    if radicand <= 0.0:
        raise DomainError(
            "link budget %.6g does not exceed squared altitude %.6g"
            % (radio.power * radio.xi / (radio.gamma_th * radio.sigma2), h * h)
        )
    return math.sqrt(radicand)


def footprint_halfwidth(uav: Uav, d: float) -> float:
    """Half-width of the ground footprint along the length axis for a strip
    of width ``d``: sqrt(r^2 - (d/2)^2). Equals r when d == 0."""
    if d == 0.0:
        return uav.r
    half = 0.5 * d
    if uav.r < half:
        raise DomainError(
            f"agent {uav.id}: radius {uav.r} is below half the strip width {half}"
        )
    return math.sqrt(uav.r**2 - half**2)


# ---------------------------------------------------------------------------
# Coverage verification and bounds
# ---------------------------------------------------------------------------


def verify_coverage(instance: Instance, deployment: Deployment) -> bool:
    """True iff the union of the dispatched agents' footprint intervals
    contains [0, beta] up to the geometric tolerance.

    Sorts the intervals and sweeps for gaps; monotone in the placement set.
    """
    tol = instance.geom_tol
    intervals = []
    for p in deployment.placements:
        u = instance.by_id(p.uav_id)
        w = footprint_halfwidth(u, instance.d)
        intervals.append((p.y - w, p.y + w))
    intervals.sort()
    covered = 0.0
    for lo, hi in intervals:
        if lo > covered + tol:
            return False
        if hi > covered:
            covered = hi
        if covered >= instance.beta - tol:
            return True
    return covered >= instance.beta - tol


def coverage_gap(instance: Instance, deployment: Deployment) -> Optional[tuple[float, float]]:
    """First uncovered (lo, hi) stretch of [0, beta], or None when covered."""
    tol = instance.geom_tol
    intervals = []
    for p in deployment.placements:
        u = instance.by_id(p.uav_id)
        w = footprint_halfwidth(u, instance.d)
        intervals.append((p.y - w, p.y + w))
    intervals.sort()
    covered = 0.0
    for lo, hi in intervals:
        if lo > covered + tol:
            return (covered, min(lo, instance.beta))
        if hi > covered:
            covered = hi
        if covered >= instance.beta - tol:
            return None
    if covered >= instance.beta - tol:
        return None
    return (covered, instance.beta)


def bounds(instance: Instance) -> BoundReport:
    """Deadline and total-delay bounds plus heterogeneity ratios.

    t_l is the smallest possible travel time of any agent (its vertical
    ascent); t_u lets every agent reach either end of the target, which
    always admits a deployment; gamma_u sums those worst-case travels.
    """
    t_l = min(u.h / u.v for u in instance.uavs)
    fars = []
    for u in instance.uavs:
        far = max(
            travel_time(u, 0.0, instance.metric),
            travel_time(u, instance.beta, instance.metric),
        )
        fars.append(far)
    h_max = max(u.h for u in instance.uavs)
    h_min = min(u.h for u in instance.uavs)
    if h_min > 0.0:
        kappa = h_max / h_min
    else:
        kappa = 1.0 if h_max == 0.0 else math.inf
    v_max = max(u.v for u in instance.uavs)
    v_min = min(u.v for u in instance.uavs)
    return BoundReport(
        t_l=t_l,
        t_u=max(fars),
        gamma_u=sum(fars),
        kappa=kappa,
        tau=v_max / v_min,
    )


# ---------------------------------------------------------------------------
# Symmetry helpers
# ---------------------------------------------------------------------------


def reflect_instance(instance: Instance) -> Instance:
    """Mirror the instance about beta/2; positions map as y -> beta - y."""
    mirrored = tuple(
        Uav(id=u.id, x=instance.beta - u.x, r=u.r, h=u.h, v=u.v, z=u.z)
        for u in instance.uavs
    )
    return Instance(
        beta=instance.beta,
        d=instance.d,
        uavs=mirrored,
        radio=instance.radio,
        metric=instance.metric,
    )


def common_origin(instance: Instance) -> float:
    """The shared initial abscissa, or raise if the fleet is dispersed."""
    xs = [u.x for u in instance.uavs]
    if max(xs) - min(xs) > instance.geom_tol:
        raise InvalidInstanceError("agents are not dispatched from one location")
    return xs[0]
