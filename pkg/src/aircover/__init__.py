"""Fast deployment of heterogeneous aerial agents for full coverage of a
line interval or a gridded rectangle, minimizing either the maximum or the
total travel delay."""

from .errors import (
    AircoverError,
    DomainError,
    GridExhaustedError,
    InfeasibleError,
    InvalidInstanceError,
    OracleSizeError,
    UnsupportedError,
)
from .generators import (
    GenConfig,
    ThreePartitionGadget,
    enumerate_partition_multisets,
    gen_hard_instance,
    gen_random,
    gen_shared_origin,
)
from .minmax import (
    FeasibilityOutcome,
    MinMaxSolution,
    check_feasibility,
    fptas_minmax,
    solve_common_origin_minmax,
)
from .minsum import (
    CrossBoundsReport,
    DpTable,
    MinSumSolution,
    cross_bounds_check,
    dp_minsum,
    greedy_common_origin_minsum,
)
from .model import (
    BoundReport,
    Deployment,
    Instance,
    Placement,
    RadioParams,
    Uav,
    bounds,
    footprint_halfwidth,
    horizontal_reach,
    radius_from_snr,
    reflect_instance,
    travel_time,
    travel_time_to,
    verify_coverage,
)
from .oracles import (
    MinSumOracleResult,
    bisect_order_minmax,
    brute_force_minmax,
    brute_force_minsum,
    continuous_order_minsum,
    distinct_orders,
    exists_order_feasible,
    has_three_partition,
)
from .planar import (
    GridPlan,
    PlanarOutcome,
    PlanarSolution,
    check_feasibility_2d,
    fptas_minmax_2d,
    make_grid,
    verify_planar_coverage,
    verify_square_containment,
)

__version__ = "0.1.0"

__all__ = [
    "AircoverError",
    "BoundReport",
    "CrossBoundsReport",
    "Deployment",
    "DomainError",
    "DpTable",
    "FeasibilityOutcome",
    "GenConfig",
    "GridExhaustedError",
    "GridPlan",
    "InfeasibleError",
    "Instance",
    "InvalidInstanceError",
    "MinMaxSolution",
    "MinSumOracleResult",
    "MinSumSolution",
    "OracleSizeError",
    "Placement",
    "PlanarOutcome",
    "PlanarSolution",
    "RadioParams",
    "ThreePartitionGadget",
    "Uav",
    "UnsupportedError",
    "bisect_order_minmax",
    "bounds",
    "brute_force_minmax",
    "brute_force_minsum",
    "check_feasibility",
    "check_feasibility_2d",
    "continuous_order_minsum",
    "cross_bounds_check",
    "distinct_orders",
    "dp_minsum",
    "enumerate_partition_multisets",
    "exists_order_feasible",
    "footprint_halfwidth",
    "fptas_minmax",
    "fptas_minmax_2d",
    "gen_hard_instance",
    "gen_random",
    "gen_shared_origin",
    "greedy_common_origin_minsum",
    "has_three_partition",
    "horizontal_reach",
    "make_grid",
    "radius_from_snr",
    "reflect_instance",
    "solve_common_origin_minmax",
    "travel_time",
    "travel_time_to",
    "verify_coverage",
    "verify_planar_coverage",
    "verify_square_containment",
]
