"""Random instance generation and 3-partition hard-instance gadgets.

Random fleets: positions uniform over a span, radius/speed/altitude
uniform over configurable ranges, radii resampled (bounded retries) until
the coverage precondition holds. Everything is a pure function of the
config including its seed.

The gadget families encode a 3-partition question: a deadline (min-max
variant) or a total-delay budget (min-sum variant) K is achievable exactly
when the integer multiset admits a partition into triples of equal sum.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterator, Literal, Optional, Sequence

import numpy as np

from .errors import InfeasibleError, InvalidInstanceError
from .model import Instance, Metric, Uav


@dataclass(frozen=True)
class GenConfig:
    """Distribution parameters for one random fleet."""

    n: int
    beta: float = 20.0
    d: float = 0.0
    r_range: tuple[float, float] = (1.0, 3.0)
    v_range: tuple[float, float] = (10.0, 50.0)
    h_range: tuple[float, float] = (0.5, 2.0)
    x_span: Optional[tuple[float, float]] = None  # default: across the target
    z_span: tuple[float, float] = (0.0, 0.0)
    metric: Metric = "euclidean"
    seed: int = 0
    max_retries: int = 200

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InvalidInstanceError("fleet size must be >= 1")
        for name in ("r_range", "v_range", "h_range"):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise InvalidInstanceError(f"{name} is inverted")
        if self.r_range[0] < self.d / 2:
            raise InvalidInstanceError("radius range must start at d/2 or above")
        if self.v_range[0] <= 0:
            raise InvalidInstanceError("speeds must be positive")
        if self.h_range[0] < 0:
            raise InvalidInstanceError("altitudes must be nonnegative")


def gen_random(config: GenConfig) -> Instance:
    """Deterministic random instance for a config; radii are resampled up
    to ``max_retries`` times until the coverage precondition holds."""
    rng = np.random.default_rng(config.seed)
    span = config.x_span if config.x_span is not None else (0.0, config.beta)
    xs = np.sort(rng.uniform(span[0], span[1], config.n))
    zs = rng.uniform(config.z_span[0], config.z_span[1], config.n)
    vs = rng.uniform(config.v_range[0], config.v_range[1], config.n)
    hs = rng.uniform(config.h_range[0], config.h_range[1], config.n)
    half_d = config.d / 2.0
    for _ in range(config.max_retries):
        rs = rng.uniform(config.r_range[0], config.r_range[1], config.n)
        footprint = 2.0 * np.sum(np.sqrt(np.maximum(rs**2 - half_d**2, 0.0)))
        if np.all(rs >= half_d) and footprint >= config.beta:
            break
    else:
        raise InfeasibleError(
            "could not draw radii meeting the coverage precondition in "
            f"{config.max_retries} tries (n={config.n}, beta={config.beta})"
        )
    uavs = tuple(
        Uav(id=i, x=float(xs[i]), r=float(rs[i]), h=float(hs[i]), v=float(vs[i]), z=float(zs[i]))
        for i in range(config.n)
    )
    return Instance(beta=config.beta, d=config.d, uavs=uavs, metric=config.metric)


def gen_shared_origin(config: GenConfig, origin: float = 0.0) -> Instance:
    """Random fleet dispatched from one shared abscissa."""
    return gen_random(replace(config, x_span=(origin, origin)))


# ---------------------------------------------------------------------------
# Hard-instance gadgets
# ---------------------------------------------------------------------------

GadgetVariant = Literal["minmax", "minsum"]


@dataclass(frozen=True)
class ThreePartitionGadget:
    """A deployment instance encoding a 3-partition question.

    ``k`` is the deadline (minmax variant) or total-delay budget (minsum
    variant) that is achievable iff the multiset partitions into triples
    of sum b. The first 3m agents carry the multiset as radii a_i/2
    starting at -a_i/2; the m-1 blocker agents sit over the unit gaps
    between the m blocks and can only afford to stay there."""

    multiset: tuple[int, ...]
    m: int
    b: int
    variant: GadgetVariant
    instance: Instance
    k: float
    padded: bool = False


def validate_three_partition_multiset(values: Sequence[int]) -> tuple[int, int]:
    """Check the 3-partition preconditions; returns (m, B)."""
    vals = list(values)
    if len(vals) % 3 != 0 or not vals:
        raise InvalidInstanceError("multiset size must be a positive multiple of 3")
    if any(int(a) != a or a <= 0 for a in vals):
        raise InvalidInstanceError("multiset entries must be positive integers")
    m = len(vals) // 3
    total = sum(vals)
    if total % m != 0:
        raise InvalidInstanceError(f"multiset sum {total} is not divisible by m={m}")
    b = total // m
    for a in vals:
        if not (b / 4 < a < b / 2):
            raise InvalidInstanceError(
                f"entry {a} violates B/4 < a < B/2 for B={b}"
            )
    return m, b


def gen_hard_instance(
    multiset: Sequence[int], variant: GadgetVariant = "minmax", pad_extra: bool = False
) -> ThreePartitionGadget:
    """Build the gadget instance for a valid 3-partition multiset.

    With ``pad_extra`` one more agent (radius 1, speed 1/(K+1), start
    -3/2) is added so the total footprint strictly exceeds the target;
    it can never participate within K."""
    m, b = validate_three_partition_multiset(multiset)
    vals = sorted((int(a) for a in multiset), reverse=True)
    beta = float(m * b + m - 1)
    if variant == "minmax":
        k = beta
        blocker_h, blocker_v = 1.0, 1.0 / k
    elif variant == "minsum":
        k = float(3 * b * m * (m + 1) + 3 * (m - 1))
        blocker_h, blocker_v = 0.0, 1.0 / (k + 1.0)
    else:
        raise InvalidInstanceError(f"unknown gadget variant {variant!r}")
    uavs = [
        Uav(id=i, x=-a / 2.0, r=a / 2.0, h=0.0, v=1.0)
        for i, a in enumerate(vals)
    ]
    for j in range(1, m):
        uavs.append(
            Uav(
                id=3 * m + j - 1,
                x=j * b + (2 * j - 1) / 2.0,
                r=0.5,
                h=blocker_h,
                v=blocker_v,
            )
        )
    if pad_extra:
        uavs.append(Uav(id=4 * m - 1, x=-1.5, r=1.0, h=0.0, v=1.0 / (k + 1.0)))
    instance = Instance(beta=beta, d=0.0, uavs=tuple(uavs))
    return ThreePartitionGadget(
        multiset=tuple(vals), m=m, b=b, variant=variant, instance=instance, k=k, padded=pad_extra
    )


def enumerate_partition_multisets(m: int, b: int) -> Iterator[tuple[int, ...]]:
    """All multisets of 3m integers in (B/4, B/2) summing to m*B,
    enumerated as nonincreasing tuples. Small m and B only."""
    lo = b // 4 + 1
    hi = (b - 1) // 2 if b % 2 else b // 2 - 1
    size = 3 * m
    target = m * b

    def rec(remaining: int, budget: int, cap: int) -> Iterator[tuple[int, ...]]:
        if remaining == 0:
            if budget == 0:
                yield ()
            return
        for a in range(min(cap, budget - lo * (remaining - 1)), lo - 1, -1):
            for rest in rec(remaining - 1, budget - a, a):
                yield (a,) + rest

    yield from rec(size, target, hi)
