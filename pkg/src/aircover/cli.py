"""Command-line front end.

Exit codes: 0 success, 1 invalid input, 2 infeasible, 3 coverage gap
(verify), 4 delay mismatch (verify). Results are JSON on stdout or at
--out; sweeps write CSV (and optionally SVG).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Optional

import numpy as np

from .errors import (
    AircoverError,
    DomainError,
    InfeasibleError,
    InvalidInstanceError,
    OracleSizeError,
    UnsupportedError,
)
from .generators import GenConfig, gen_hard_instance, gen_random
from .io import (
    instance_to_dict,
    load_instance,
    load_result,
    placements_from_result,
    result_to_dict,
    save_instance,
    solution_to_dict,
)
from .minmax import check_feasibility, fptas_minmax, solve_common_origin_minmax
from .minsum import dp_minsum, greedy_common_origin_minsum
from .model import Deployment, coverage_gap, travel_time, travel_time_to
from .oracles import brute_force_minmax, brute_force_minsum
from .planar import check_feasibility_2d, fptas_minmax_2d, verify_planar_coverage
from .sweep import (
    SOLVERS,
    SWEEP_PARAMS,
    SweepSpec,
    rows_to_csv,
    run_sweep,
    write_csv,
    write_svg,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INFEASIBLE = 2
EXIT_GAP = 3
EXIT_DELAY = 4

DELAY_RTOL = 1e-9


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems are input errors (exit 1)
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def _emit(document: dict, out: Optional[str]) -> None:
    text = json.dumps(document, indent=2, sort_keys=True)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _infeasible(reason: str, out: Optional[str]) -> int:
    _emit({"error": "infeasible", "reason": reason}, out)
    return EXIT_INFEASIBLE


# ---------------------------------------------------------------------------
# solve / feasible
# ---------------------------------------------------------------------------


_METHODS = {"minmax": {None, "fptas", "exact"}, "minsum": {None, "dp", "greedy"}, "minmax2d": {None}}


def cmd_solve(args) -> int:
    if args.method not in _METHODS[args.problem]:
        raise InvalidInstanceError(
            f"method {args.method!r} does not apply to problem {args.problem!r}"
        )
    instance = load_instance(args.instance)
    try:
        if args.problem == "minmax":
            if args.method == "exact":
                sol = solve_common_origin_minmax(instance)
            else:
                sol = fptas_minmax(instance, args.epsilon)
        elif args.problem == "minsum":
            if args.method == "greedy":
                sol = greedy_common_origin_minsum(instance)
            else:
                sol = dp_minsum(instance, grid_unit=args.grid_unit, grid_steps=args.grid_steps)
        else:  # minmax2d
            psol = fptas_minmax_2d(instance, args.epsilon, r_eff=args.r_eff)
            doc = result_to_dict(
                instance,
                psol.deployment,
                psol.objective,
                "fptas_2d",
                {
                    "epsilon": psol.epsilon,
                    "grid_step": psol.grid_step,
                    "grid": {"p": psol.plan.p, "q": psol.plan.q, "r_eff": psol.plan.r_eff},
                },
            )
            _emit(doc, args.out)
            return EXIT_OK
    except InfeasibleError as exc:
        return _infeasible(str(exc), args.out)
    _emit(solution_to_dict(instance, sol), args.out)
    return EXIT_OK


def cmd_feasible(args) -> int:
    instance = load_instance(args.instance)
    if args.planar:
        try:
            outcome = check_feasibility_2d(instance, args.deadline, r_eff=args.r_eff)
        except InfeasibleError as exc:
            return _infeasible(str(exc), args.out)
        doc = {
            "feasible": outcome.feasible,
            "deadline": args.deadline,
            "placements": [
                {"id": p.uav_id, "y": p.y, "zp": p.zp} for p in outcome.placements
            ],
        }
        _emit(doc, args.out)
        return EXIT_OK if outcome.feasible else EXIT_INFEASIBLE
    try:
        outcome = check_feasibility(instance, args.deadline)
    except InfeasibleError as exc:
        return _infeasible(str(exc), args.out)
    doc = {
        "feasible": outcome.feasible,
        "deadline": args.deadline,
        "prefix": outcome.prefix,
        "placements": [
            {"id": p.uav_id, "y": p.y, **({"zp": p.zp} if p.zp is not None else {})}
            for p in outcome.placements
        ],
    }
    _emit(doc, args.out)
    return EXIT_OK if outcome.feasible else EXIT_INFEASIBLE


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def cmd_verify(args) -> int:
    instance = load_instance(args.instance)
    result = load_result(args.deployment)
    placements, declared = placements_from_result(result)
    for p in placements:
        instance.by_id(p.uav_id)  # unknown ids are input errors
    planar = any(p.zp not in (None, 0.0) for p in placements) and instance.d > 0
    if planar:
        if not verify_planar_coverage(instance, placements):
            print("coverage gap: planar target not fully covered", file=sys.stderr)
            return EXIT_GAP
    else:
        deployment = Deployment.build(instance, placements)
        gap = coverage_gap(instance, deployment)
        if gap is not None:
            print(f"coverage gap: ({gap[0]:.9g}, {gap[1]:.9g}) uncovered", file=sys.stderr)
            return EXIT_GAP
    for p in placements:
        u = instance.by_id(p.uav_id)
        if p.zp is None:
            actual = travel_time(u, p.y, instance.metric)
        else:
            actual = travel_time_to(u, p.y, p.zp, instance.metric)
        want = declared.get(p.uav_id)
        if want is None or abs(actual - want) > DELAY_RTOL * max(1.0, abs(actual)):
            shown = "missing" if want is None else f"{want:.12g}"
            print(
                f"delay mismatch for agent {p.uav_id}: declared {shown}, recomputed {actual:.12g}",
                file=sys.stderr,
            )
            return EXIT_DELAY
    print("ok")
    return EXIT_OK


# ---------------------------------------------------------------------------
# gen / gadget
# ---------------------------------------------------------------------------


def _config_from_args(args) -> GenConfig:
    return GenConfig(
        n=args.n,
        beta=args.beta,
        d=args.d,
        r_range=tuple(args.r_range),
        v_range=tuple(args.v_range),
        h_range=tuple(args.h_range),
        x_span=tuple(args.x_span) if args.x_span else None,
        z_span=tuple(args.z_span),
        metric=args.metric,
        seed=args.seed,
    )


def cmd_gen(args) -> int:
    instance = gen_random(_config_from_args(args))
    if args.out:
        save_instance(instance, args.out)
    else:
        _emit(instance_to_dict(instance), None)
    return EXIT_OK


def cmd_gadget(args) -> int:
    multiset = [int(tok) for tok in args.multiset.split(",") if tok.strip()]
    gadget = gen_hard_instance(multiset, variant=args.variant, pad_extra=args.pad_extra)
    if args.out:
        save_instance(gadget.instance, args.out)
    summary = {
        "variant": gadget.variant,
        "m": gadget.m,
        "b": gadget.b,
        "beta": gadget.instance.beta,
        "k": gadget.k,
        "n": gadget.instance.n,
        "padded": gadget.padded,
    }
    print(json.dumps(summary, indent=2, sort_keys=True))
    return EXIT_OK


# ---------------------------------------------------------------------------
# sweep / bench / oracle
# ---------------------------------------------------------------------------


def cmd_sweep(args) -> int:
    spec = SweepSpec(
        param=args.param,
        values=tuple(float(v) for v in args.values.split(",")),
        solvers=tuple(args.solvers.split(",")),
        runs=args.runs,
        seed=args.seed,
        n=args.n,
        beta=args.beta,
        d=args.d,
        r_mean=args.r_mean,
        r_spread=args.r_spread,
        v_mean=args.v_mean,
        v_spread=args.v_spread,
        h_mean=args.h_mean,
        h_spread=args.h_spread,
        origin=args.origin,
        epsilon=args.epsilon,
        grid_steps=args.grid_steps,
    )
    rows = run_sweep(spec, jobs=args.jobs)
    if args.csv:
        write_csv(spec, rows, args.csv, timings=args.timings)
    else:
        sys.stdout.write(rows_to_csv(spec, rows, timings=args.timings))
    if args.svg:
        write_svg(spec, rows, args.svg)
    return EXIT_OK


def _bench_instance(args):
    if args.instance:
        return load_instance(args.instance)
    return gen_random(GenConfig(n=args.n, beta=args.beta, d=args.d, seed=args.seed))


def _time_solver(instance, solver: str, epsilon: float, grid_steps: int, repeat: int) -> list[float]:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        if solver == "fptas":
            fptas_minmax(instance, epsilon)
        elif solver == "dp":
            dp_minsum(instance, grid_steps=grid_steps)
        elif solver == "common_origin":
            solve_common_origin_minmax(instance)
        elif solver == "greedy":
            greedy_common_origin_minsum(instance)
        else:
            raise InvalidInstanceError(f"unknown solver {solver!r}")
        times.append(time.perf_counter() - t0)
    return times


def cmd_bench(args) -> int:
    if args.repeat < 1:
        raise InvalidInstanceError("repeat must be >= 1")
    report: dict = {"solver": args.solver, "repeat": args.repeat}
    if args.scaling:
        # Doubling ladder in fleet size; the log-log slope of the median
        # times should stay at or below quadratic-ish growth.
        sizes = [args.n * (2**k) for k in range(4)]
        medians = []
        for n in sizes:
            inst = gen_random(GenConfig(n=n, beta=args.beta, d=args.d, seed=args.seed))
            times = _time_solver(inst, args.solver, args.epsilon, args.grid_steps, args.repeat)
            medians.append(float(np.median(times)))
        slope = float(np.polyfit(np.log(sizes), np.log(medians), 1)[0])
        report.update(
            {
                "sizes": sizes,
                "median_s": medians,
                "loglog_slope": slope,
                "scaling_ok": bool(slope <= 2.3),
            }
        )
    else:
        instance = _bench_instance(args)
        times = sorted(
            _time_solver(instance, args.solver, args.epsilon, args.grid_steps, args.repeat)
        )
        arr = np.asarray(times)
        report.update(
            {
                "n": instance.n,
                "mean_s": float(arr.mean()),
                "p50_s": float(np.percentile(arr, 50)),
                "p90_s": float(np.percentile(arr, 90)),
                "max_s": float(arr.max()),
            }
        )
    print(json.dumps(report, indent=2, sort_keys=True))
    return EXIT_OK


def cmd_oracle(args) -> int:
    instance = load_instance(args.instance)
    try:
        if args.problem == "minmax":
            objective, deployment = brute_force_minmax(instance, max_n=args.max_n)
            doc = result_to_dict(instance, deployment, objective, "brute_force_minmax")
        else:
            res = brute_force_minsum(instance, max_n=args.max_n)
            doc = {
                "objective": res.objective,
                "method": "brute_force_minsum",
                "order": list(res.order),
                "grid_unit": res.grid_unit,
                "converged": res.converged,
            }
    except InfeasibleError as exc:
        return _infeasible(str(exc), args.out)
    _emit(doc, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="aircover", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve one instance")
    p_solve.add_argument("problem", choices=["minmax", "minsum", "minmax2d"])
    p_solve.add_argument("--instance", required=True)
    p_solve.add_argument("--epsilon", type=float, default=1e-3)
    p_solve.add_argument("--grid-steps", type=int, default=2000)
    p_solve.add_argument("--grid-unit", type=float, default=None)
    p_solve.add_argument("--method", choices=["fptas", "exact", "dp", "greedy"], default=None)
    p_solve.add_argument("--r-eff", type=float, default=None)
    p_solve.add_argument("--out", default=None)
    p_solve.set_defaults(func=cmd_solve)

    p_feas = sub.add_parser("feasible", help="probe one deadline")
    p_feas.add_argument("--instance", required=True)
    p_feas.add_argument("--deadline", type=float, required=True)
    p_feas.add_argument("--planar", action="store_true", help="use the 2D grid check")
    p_feas.add_argument("--r-eff", type=float, default=None)
    p_feas.add_argument("--out", default=None)
    p_feas.set_defaults(func=cmd_feasible)

    p_gen = sub.add_parser("gen", help="generate a random instance")
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--beta", type=float, default=20.0)
    p_gen.add_argument("--d", type=float, default=0.0)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--r-range", type=float, nargs=2, default=[1.0, 3.0])
    p_gen.add_argument("--v-range", type=float, nargs=2, default=[10.0, 50.0])
    p_gen.add_argument("--h-range", type=float, nargs=2, default=[0.5, 2.0])
    p_gen.add_argument("--x-span", type=float, nargs=2, default=None)
    p_gen.add_argument("--z-span", type=float, nargs=2, default=[0.0, 0.0])
    p_gen.add_argument("--metric", choices=["euclidean", "manhattan"], default="euclidean")
    p_gen.add_argument("--out", default=None)
    p_gen.set_defaults(func=cmd_gen)

    p_gad = sub.add_parser("gadget", help="build a 3-partition hard instance")
    p_gad.add_argument("--multiset", required=True, help="comma-separated positive integers")
    p_gad.add_argument("--variant", choices=["minmax", "minsum"], default="minmax")
    p_gad.add_argument("--pad-extra", action="store_true")
    p_gad.add_argument("--out", default=None)
    p_gad.set_defaults(func=cmd_gadget)

    p_verify = sub.add_parser("verify", help="re-check a solver result")
    p_verify.add_argument("--instance", required=True)
    p_verify.add_argument("--deployment", required=True)
    p_verify.set_defaults(func=cmd_verify)

    p_sweep = sub.add_parser("sweep", help="parameter sweep to CSV")
    p_sweep.add_argument("--param", choices=list(SWEEP_PARAMS), required=True)
    p_sweep.add_argument("--values", required=True, help="comma-separated, increasing")
    p_sweep.add_argument("--solvers", default="fptas", help=f"subset of {','.join(SOLVERS)}")
    p_sweep.add_argument("--runs", type=int, default=1000)
    p_sweep.add_argument("--seed", type=int, default=0)
    p_sweep.add_argument("--n", type=int, default=30)
    p_sweep.add_argument("--beta", type=float, default=20.0)
    p_sweep.add_argument("--d", type=float, default=0.0)
    p_sweep.add_argument("--r-mean", type=float, default=2.0)
    p_sweep.add_argument("--r-spread", type=float, default=1.0)
    p_sweep.add_argument("--v-mean", type=float, default=30.0)
    p_sweep.add_argument("--v-spread", type=float, default=20.0)
    p_sweep.add_argument("--h-mean", type=float, default=1.25)
    p_sweep.add_argument("--h-spread", type=float, default=0.75)
    p_sweep.add_argument("--origin", type=float, default=None)
    p_sweep.add_argument("--epsilon", type=float, default=1e-3)
    p_sweep.add_argument("--grid-steps", type=int, default=300)
    p_sweep.add_argument("--jobs", type=int, default=1)
    p_sweep.add_argument("--timings", action="store_true")
    p_sweep.add_argument("--csv", default=None)
    p_sweep.add_argument("--svg", default=None)
    p_sweep.set_defaults(func=cmd_sweep)

    p_bench = sub.add_parser("bench", help="wall-time report for one solver")
    p_bench.add_argument("--instance", default=None)
    p_bench.add_argument("--solver", choices=list(SOLVERS), required=True)
    p_bench.add_argument("--repeat", type=int, default=5)
    p_bench.add_argument("--epsilon", type=float, default=1e-3)
    p_bench.add_argument("--grid-steps", type=int, default=300)
    p_bench.add_argument("--scaling", action="store_true", help="doubling ladder in n")
    p_bench.add_argument("--n", type=int, default=50)
    p_bench.add_argument("--beta", type=float, default=20.0)
    p_bench.add_argument("--d", type=float, default=0.0)
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.set_defaults(func=cmd_bench)

    p_oracle = sub.add_parser("oracle", help="exact brute force at desk scale")
    p_oracle.add_argument("problem", choices=["minmax", "minsum"])
    p_oracle.add_argument("--instance", required=True)
    p_oracle.add_argument("--max-n", type=int, default=8)
    p_oracle.add_argument("--out", default=None)
    p_oracle.set_defaults(func=cmd_oracle)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (InvalidInstanceError, DomainError, UnsupportedError, OracleSizeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except AircoverError as exc:  # pragma: no cover - catch-all for new kinds
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
