"""Command line interface.

Subcommands: gen (write a benchmark instance), solve (full pipeline on
one instance), bench (seeded batches with aggregate CSV and figures),
validate (schedule checker) and route (single-cluster routing debug).
Exit code 0 only when every run produced a validated schedule.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import bench as bench_mod
from . import figures, jsonio
from .gen import GenConfig, generate
from .model import Schedule, SolverError, validate_schedule
from .router import (BUDGET_EXHAUSTED, FEASIBLE, MODE_FEASIBILITY,
                     MODE_OPTIMIZE, RoutingRequest, solve as route_solve)


def _add_router_budget(p):
    p.add_argument("--router-budget-s", type=float, default=None,
                   help="wall-clock budget per routing subproblem (seconds)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sweepvrp",
        description="Sweep-clustering solver for the capacitated VRP with "
                    "structured time windows")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a benchmark instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--capacity", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--grid-m", type=float, default=20000.0)
    p.add_argument("--speed-kmh", type=float, default=20.0)
    p.add_argument("--windows", type=int, default=10)
    p.add_argument("--window-len-s", type=int, default=3600)
    p.add_argument("--service-s", type=int, default=300)
    p.add_argument("--depot", choices=["center", "corner"], default="center")
    p.add_argument("--out", required=True, help="instance JSON path")

    p = sub.add_parser("solve", help="run the full pipeline on one instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--variant", choices=["traditional", "a", "b", "c"], default="a")
    p.add_argument("--direction", choices=["ccw", "cw", "both"], default="ccw")
    p.add_argument("--improve", choices=["on", "off"], default="off")
    _add_router_budget(p)
    p.add_argument("--no-figures", action="store_true")
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("bench", help="run seeded benchmark batches")
    p.add_argument("--n", type=int, nargs="+", default=[250])
    p.add_argument("--capacity", type=float, nargs="+", default=[200.0])
    p.add_argument("--seeds", type=int, default=5,
                   help="use seeds 0..seeds-1 (ignored with --seed-list)")
    p.add_argument("--seed-list", type=int, nargs="+", default=None)
    p.add_argument("--variants", nargs="+",
                   choices=["traditional", "a", "b", "c"], default=["a", "b", "c"])
    p.add_argument("--direction", choices=["ccw", "cw", "both"], default="ccw")
    p.add_argument("--improve", choices=["off", "on", "both"], default="off")
    p.add_argument("--jobs", type=int, default=1)
    _add_router_budget(p)
    p.add_argument("--no-figures", action="store_true")
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("validate", help="validate a schedule against an instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--schedule", required=True)

    p = sub.add_parser("route", help="route a single cluster (debug)")
    p.add_argument("--instance", required=True)
    p.add_argument("--cluster", required=True,
                   help='JSON file {"customers": [ids...]}')
    p.add_argument("--mode", choices=["optimize", "feasibility"], default="optimize")
    _add_router_budget(p)
    p.add_argument("--out", default=None, help="tour JSON path")

    return parser


def _cmd_gen(args) -> int:
    config = GenConfig(n=args.n, capacity=args.capacity, seed=args.seed,
                       grid_m=args.grid_m, speed_kmh=args.speed_kmh,
                       window_count=args.windows,
                       window_length_s=args.window_len_s,
                       service_s=args.service_s, depot=args.depot)
    instance = generate(config)
    jsonio.save_instance(instance, args.out)
    print(f"wrote {args.out}: n={args.n} capacity={args.capacity:g} "
          f"seed={args.seed}")
    return 0


def _cmd_solve(args) -> int:
    instance = jsonio.load_instance(args.instance)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    schedule, report = bench_mod.run_pipeline(
        instance, args.variant, args.direction, args.improve == "on",
        args.router_budget_s, instance_id=Path(args.instance).stem)
    jsonio.save_report(report.to_dict(), out / "report.json")
    if schedule is not None:
        jsonio.save_schedule(schedule, out / "schedule.json")
        if not args.no_figures:
            figures.plot_schedule(instance, schedule, out / "schedule.png")
    if report.status != "ok":
        print("FAILED:", "; ".join(report.diagnostics), file=sys.stderr)
        return 1
    vehicles, duration, travel = report.objective
    print(f"ok: vehicles={vehicles} duration_s={duration} travel_s={travel} "
          f"wall_s={report.wall_s:.2f}")
    return 0


def _cmd_bench(args) -> int:
    seeds = args.seed_list if args.seed_list is not None else list(range(args.seeds))
    improve_flags = {"off": [False], "on": [True], "both": [False, True]}[args.improve]
    specs = [bench_mod.RunSpec(n=n, capacity=c, seed=s, variant=v,
                               direction=args.direction, improve=imp,
                               router_budget_s=args.router_budget_s)
             for n in args.n for c in args.capacity for v in args.variants
             for imp in improve_flags for s in seeds]
    out = Path(args.out)
    (out / "reports").mkdir(parents=True, exist_ok=True)
    reports = bench_mod.run_batch(specs, jobs=args.jobs)
    for report in reports:
        jsonio.save_report(report.to_dict(),
                           out / "reports" / f"{report.instance_id}.json")
    rows = bench_mod.aggregate(reports)
    bench_mod.write_aggregate_csv(rows, out / "aggregate.csv")
    if rows and not args.no_figures:
        figures.plot_aggregate(rows, out / "aggregate.png")

    header = f"{'variant':>8} {'C':>6} {'improve':>7} {'runs':>4} " \
             f"{'t[s]':>8} {'l1':>7} {'l2[h]':>8} {'l3[h]':>8}"
    print(header)
    for r in rows:
        print(f"{r['variant']:>8} {r['capacity']:>6g} "
              f"{str(r['improve']):>7} {r['runs']:>4} "
              f"{r['mean_t_s']:>8.2f} {r['mean_lambda1']:>7.2f} "
              f"{r['mean_lambda2_h']:>8.2f} {r['mean_lambda3_h']:>8.2f}")
    failed = [r for r in reports if r.status != "ok"]
    if failed:
        print(f"{len(failed)} of {len(reports)} runs failed", file=sys.stderr)
        for r in failed[:10]:
            print(f"  {r.instance_id}: {'; '.join(r.diagnostics)}", file=sys.stderr)
        return 1
    return 0


def _cmd_validate(args) -> int:
    instance = jsonio.load_instance(args.instance)
    schedule = jsonio.load_schedule(args.schedule)
    violations = validate_schedule(schedule, instance)
    if not violations:
        print("ok")
        return 0
    for v in violations:
        print(str(v))
    return 1


def _cmd_route(args) -> int:
    instance = jsonio.load_instance(args.instance)
    ids = jsonio.load_cluster_ids(args.cluster)
    try:
        members = tuple(instance.by_id[cid] for cid in ids)
    except KeyError as e:
        raise SolverError(f"cluster references unknown customer {e.args[0]}") from None
    mode = MODE_OPTIMIZE if args.mode == "optimize" else MODE_FEASIBILITY
    result = route_solve(RoutingRequest(members, instance, mode,
                                        args.router_budget_s))
    if result.status == BUDGET_EXHAUSTED:
        print("budget exhausted: feasibility undecided", file=sys.stderr)
        return 2
    if result.status != FEASIBLE:
        print("infeasible")
        return 0
    duration, travel = result.objective
    print(f"feasible: duration_s={duration} travel_s={travel}")
    if args.out:
        jsonio.save_schedule(Schedule([result.tour]), args.out)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {"gen": _cmd_gen, "solve": _cmd_solve, "bench": _cmd_bench,
                "validate": _cmd_validate, "route": _cmd_route}
    try:
        return handlers[args.command](args)
    except SolverError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
