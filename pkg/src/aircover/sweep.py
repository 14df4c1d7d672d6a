"""Parameter sweeps: batches of seeded random instances per swept value,
solved by the requested solvers, aggregated into CSV rows (and an optional
SVG line chart).

Rows are deterministic functions of the spec seed; wall-clock columns are
therefore opt-in (``timings=True``) so the default CSV is byte-stable.
"""

from __future__ import annotations

import concurrent.futures
import time
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import InfeasibleError, InvalidInstanceError, UnsupportedError
from .generators import GenConfig, gen_random
from .minmax import fptas_minmax, solve_common_origin_minmax
from .minsum import dp_minsum, greedy_common_origin_minsum

SWEEP_PARAMS = ("n", "r_mean", "v_mean", "h_var", "v_var", "epsilon")
SOLVERS = ("common_origin", "fptas", "greedy", "dp")

CSV_COLUMNS = [
    "param",
    "value",
    "solver",
    "runs",
    "infeasible",
    "mean_objective",
    "std_objective",
    "mean_max_delay",
    "mean_total_delay",
]


@dataclass(frozen=True)
class SweepSpec:
    """One sweep: a parameter, its strictly increasing values, the solvers
    to run and the base fleet distribution."""

    param: str
    values: tuple[float, ...]
    solvers: tuple[str, ...]
    runs: int = 1000
    seed: int = 0
    n: int = 30
    beta: float = 20.0
    d: float = 0.0
    r_mean: float = 2.0
    r_spread: float = 1.0
    v_mean: float = 30.0
    v_spread: float = 20.0
    h_mean: float = 1.25
    h_spread: float = 0.75
    origin: Optional[float] = None  # None: spread across the target
    epsilon: float = 1e-3
    grid_steps: int = 300

    def __post_init__(self) -> None:
        if self.param not in SWEEP_PARAMS:
            raise InvalidInstanceError(f"unknown sweep parameter {self.param!r}")
        if self.runs < 1:
            raise InvalidInstanceError("runs must be >= 1")
        if not self.values or any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise InvalidInstanceError("sweep values must be strictly increasing")
        unknown = set(self.solvers) - set(SOLVERS)
        if unknown:
            raise InvalidInstanceError(f"unknown solvers: {sorted(unknown)}")
        if self.origin is None and set(self.solvers) & {"common_origin", "greedy"}:
            raise InvalidInstanceError(
                "common_origin/greedy solvers need a shared origin (set origin)"
            )


def _config_for(spec: SweepSpec, value: float, seed: int) -> tuple[GenConfig, float]:
    """Materialize the generator config for one swept value; returns the
    config and the epsilon in force."""
    n = spec.n
    r_lo, r_hi = spec.r_mean - spec.r_spread, spec.r_mean + spec.r_spread
    v_lo, v_hi = spec.v_mean - spec.v_spread, spec.v_mean + spec.v_spread
    h_lo, h_hi = spec.h_mean - spec.h_spread, spec.h_mean + spec.h_spread
    epsilon = spec.epsilon
    if spec.param == "n":
        n = int(value)
    elif spec.param == "r_mean":
        r_lo, r_hi = value - spec.r_spread, value + spec.r_spread
    elif spec.param == "v_mean":
        v_lo, v_hi = value - spec.v_spread, value + spec.v_spread
    elif spec.param == "h_var":
        h_lo, h_hi = spec.h_mean * (1.0 - value), spec.h_mean * (1.0 + value)
    elif spec.param == "v_var":
        v_lo, v_hi = spec.v_mean * (1.0 - value), spec.v_mean * (1.0 + value)
    elif spec.param == "epsilon":
        epsilon = value
    span = (spec.origin, spec.origin) if spec.origin is not None else None
    return (
        GenConfig(
            n=n,
            beta=spec.beta,
            d=spec.d,
            r_range=(max(r_lo, spec.d / 2 + 1e-9) if spec.d else r_lo, r_hi),
            v_range=(v_lo, v_hi),
            h_range=(max(h_lo, 0.0), h_hi),
            x_span=span,
            seed=seed,
        ),
        epsilon,
    )


def _solve_one(solver: str, instance, epsilon: float, grid_steps: int):
    if solver == "common_origin":
        sol = solve_common_origin_minmax(instance)
    elif solver == "fptas":
        sol = fptas_minmax(instance, epsilon)
    elif solver == "greedy":
        sol = greedy_common_origin_minsum(instance)
    elif solver == "dp":
        sol = dp_minsum(instance, grid_steps=grid_steps)
    else:  # pragma: no cover - validated upstream
        raise InvalidInstanceError(f"unknown solver {solver!r}")
    return sol.objective, sol.deployment.max_delay, sol.deployment.total_delay


def run_point(spec: SweepSpec, point_idx: int) -> list[dict]:
    """All runs for one swept value; returns one aggregate row per solver."""
    value = spec.values[point_idx]
    acc = {
        s: {"objective": [], "max_delay": [], "total_delay": [], "runtime": [], "infeasible": 0}
        for s in spec.solvers
    }
    for run_idx in range(spec.runs):
        # One seed stream per run index, shared by all points: sweeps
        # compare matched instance batches, which strips the between-point
        # sampling noise from the trends.
        child = np.random.SeedSequence(spec.seed, spawn_key=(run_idx,))
        seed = int(child.generate_state(1)[0])
        config, epsilon = _config_for(spec, value, seed)
        try:
            instance = gen_random(config)
        except InfeasibleError:
            for s in spec.solvers:
                acc[s]["infeasible"] += 1
            continue
        for s in spec.solvers:
            t0 = time.perf_counter()
            try:
                objective, max_d, total_d = _solve_one(s, instance, epsilon, spec.grid_steps)
            except (InfeasibleError, UnsupportedError):
                acc[s]["infeasible"] += 1
                continue
            acc[s]["runtime"].append(time.perf_counter() - t0)
            acc[s]["objective"].append(objective)
            acc[s]["max_delay"].append(max_d)
            acc[s]["total_delay"].append(total_d)
    rows = []
    for s in spec.solvers:
        a = acc[s]
        obj = np.asarray(a["objective"], dtype=float)
        rows.append(
            {
                "param": spec.param,
                "value": value,
                "solver": s,
                "runs": spec.runs,
                "infeasible": a["infeasible"],
                "mean_objective": float(obj.mean()) if obj.size else float("nan"),
                "std_objective": float(obj.std()) if obj.size else float("nan"),
                "mean_max_delay": float(np.mean(a["max_delay"])) if a["max_delay"] else float("nan"),
                "mean_total_delay": float(np.mean(a["total_delay"])) if a["total_delay"] else float("nan"),
                "mean_runtime_s": float(np.mean(a["runtime"])) if a["runtime"] else float("nan"),
            }
        )
    return rows


def run_sweep(spec: SweepSpec, jobs: int = 1) -> list[dict]:
    """Run every point; rows are ordered by (value, solver) regardless of
    the level of parallelism."""
    if jobs <= 1:
        batches = [run_point(spec, i) for i in range(len(spec.values))]
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = {pool.submit(run_point, spec, i): i for i in range(len(spec.values))}
            batches = [None] * len(spec.values)
            for fut, idx in futures.items():
                batches[idx] = fut.result()
    return [row for batch in batches for row in batch]


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def rows_to_csv(spec: SweepSpec, rows: Sequence[dict], timings: bool = False) -> str:
    """Render the aggregate rows; LF endings, '.' decimals, shortest
    round-trip float formatting, one comment block documenting columns."""
    columns = CSV_COLUMNS + (["mean_runtime_s"] if timings else [])
    lines = [
        "# aerial coverage sweep: one row per (value, solver)",
        "# objective: solver objective (hours); std over the run batch",
        "# mean_max_delay/mean_total_delay: recomputed deployment delays (hours)",
        "# infeasible: runs that produced no deployment",
        f"# runs per point: {spec.runs}; seed: {spec.seed}",
        ",".join(columns),
    ]
    for row in rows:
        lines.append(",".join(_fmt(row[c]) for c in columns))
    return "\n".join(lines) + "\n"


def write_csv(spec: SweepSpec, rows: Sequence[dict], path: str, timings: bool = False) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(rows_to_csv(spec, rows, timings))


def rows_to_svg(spec: SweepSpec, rows: Sequence[dict]) -> str:
    """Minimal deterministic SVG line chart: mean objective vs value, one
    polyline per solver."""
    width, height, margin = 640, 400, 50
    xs = [float(v) for v in spec.values]
    series: dict[str, list[tuple[float, float]]] = {}
    for row in rows:
        y = row["mean_objective"]
        if y == y:  # skip NaN points
            series.setdefault(row["solver"], []).append((float(row["value"]), y))
    ys = [y for pts in series.values() for _, y in pts] or [0.0, 1.0]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0

    def sx(x: float) -> float:
        return margin + (x - x_lo) / (x_hi - x_lo) * (width - 2 * margin)

    def sy(y: float) -> float:
        return height - margin - (y - y_lo) / (y_hi - y_lo) * (height - 2 * margin)

    palette = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" y2="{height - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height - margin}" stroke="black"/>',
        f'<text x="{width // 2}" y="{height - 12}" text-anchor="middle" font-size="12">{spec.param}</text>',
        f'<text x="14" y="{height // 2}" text-anchor="middle" font-size="12" transform="rotate(-90 14 {height // 2})">mean objective (h)</text>',
    ]
    for k, (solver, pts) in enumerate(sorted(series.items())):
        color = palette[k % len(palette)]
        coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in sorted(pts))
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{coords}"/>')
        parts.append(
            f'<text x="{width - margin + 4}" y="{margin + 14 * (k + 1)}" font-size="11" fill="{color}">{solver}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_svg(spec: SweepSpec, rows: Sequence[dict], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(rows_to_svg(spec, rows))
