"""Experiment harness: sweep -> improve -> route pipelines over instance
batches, per-run reports and Table-style aggregation."""

from __future__ import annotations

import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional

from . import jsonio
from .gen import GenConfig, generate
from .geometry import polar_view
from .improve import improve
from .model import Instance, Schedule, SolverError, validate_schedule
from .router import RouterSession
from .sweep import best_of_directions, route_clustering, run_sweep

log = logging.getLogger(__name__)

DIRECTIONS = ("ccw", "cw", "both")


@dataclass
class RunReport:
    instance_id: str
    variant: str
    direction: str
    improve: bool
    n: int
    capacity: float
    seed: Optional[int]
    status: str = "ok"            # "ok" | "failed"
    validation: str = "not-run"   # "ok" | "invalid" | "not-run"
    wall_s: float = 0.0
    phase_s: dict = field(default_factory=dict)
    objective: Optional[tuple] = None  # (vehicles, duration_s, travel_s)
    improve_moves: int = 0
    improve_trace: list = field(default_factory=list)  # objective after each move
    diagnostics: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "RunReport":
        d = dict(d)
        if d.get("objective") is not None:
            d["objective"] = tuple(d["objective"])
        d["improve_trace"] = [tuple(o) for o in d.get("improve_trace", [])]
        return cls(**d)


def run_pipeline(instance: Instance, variant: str = "a", direction: str = "ccw",
                 improve_flag: bool = False,
                 router_budget_s: Optional[float] = None,
                 instance_id: str = "") -> tuple[Optional[Schedule], RunReport]:
    """Cluster, optionally improve, route, and validate one instance.

    Never returns a partial schedule: any failure (infeasible singleton,
    routing budget exhaustion) yields (None, failed report with
    diagnostics)."""
    if direction not in DIRECTIONS:
        raise SolverError(f"unknown direction {direction!r}")
    seed = None
    if instance.meta and "generator" in instance.meta:
        seed = instance.meta["generator"].get("seed")
    report = RunReport(instance_id=instance_id, variant=variant,
                       direction=direction, improve=improve_flag,
                       n=len(instance.customers), capacity=instance.capacity,
                       seed=seed)
    t_start = time.perf_counter()
    try:
        t0 = time.perf_counter()
        if direction == "both":
            clustering = best_of_directions(instance, variant, router_budget_s)
        else:
            view = polar_view(instance, direction)
            clustering = run_sweep(instance, variant, view,
                                   RouterSession(instance, router_budget_s))
        report.phase_s["sweep"] = time.perf_counter() - t0

        session = RouterSession(instance, router_budget_s)
        if improve_flag:
            t0 = time.perf_counter()
            trace = []
            clustering = improve(clustering, instance, session, trace=trace)
            report.improve_moves = len(trace)
            report.improve_trace = [move.objective for move in trace]
            report.phase_s["improve"] = time.perf_counter() - t0

        t0 = time.perf_counter()
        schedule, objective = route_clustering(clustering, instance, session)
        report.phase_s["route"] = time.perf_counter() - t0

        t0 = time.perf_counter()
        violations = validate_schedule(schedule, instance)
        report.phase_s["validate"] = time.perf_counter() - t0
        if violations:
            report.status = "failed"
            report.validation = "invalid"
            report.diagnostics = [str(v) for v in violations]
            schedule = None
        else:
            report.validation = "ok"
            report.objective = tuple(objective)
    except SolverError as e:
        report.status = "failed"
        report.diagnostics.append(str(e))
        schedule = None
    report.wall_s = time.perf_counter() - t_start
    return schedule, report


def aggregate(reports) -> list[dict]:
    """Mean runtime and objectives per (variant, capacity, improve) cell;
    objective durations are reported in hours.  Failed runs never enter
    the aggregates; empty cells are dropped with a warning."""
    cells: dict[tuple, list[RunReport]] = {}
    for r in reports:
        key = (r.variant, r.capacity, r.improve)
        cells.setdefault(key, []).append(r)
    rows = []
    for key in sorted(cells, key=lambda k: (k[0], k[1], k[2])):
        good = [r for r in cells[key]
                if r.status == "ok" and r.validation == "ok" and r.objective]
        if not good:
            log.warning("no successful runs for variant=%s capacity=%s improve=%s; "
                        "cell omitted", *key)
            continue
        k = len(good)
        rows.append({
            "variant": key[0],
            "capacity": key[1],
            "improve": key[2],
            "runs": k,
            "mean_t_s": sum(r.wall_s for r in good) / k,
            "mean_lambda1": sum(r.objective[0] for r in good) / k,
            "mean_lambda2_h": sum(r.objective[1] for r in good) / k / 3600.0,
            "mean_lambda3_h": sum(r.objective[2] for r in good) / k / 3600.0,
        })
    return rows


AGGREGATE_COLUMNS = ["variant", "capacity", "improve", "runs",
                     "mean_t_s", "mean_lambda1", "mean_lambda2_h",
                     "mean_lambda3_h"]


def write_aggregate_csv(rows, path):
    import csv

    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=AGGREGATE_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow(row)


def io_roundtrip(value):
    """Serialize and reparse a value; the result must equal the input
    (and reserializing it must give identical bytes)."""
    if isinstance(value, Instance):
        text = jsonio.canonical_dumps(jsonio.instance_to_dict(value))
        back = jsonio.instance_from_dict(json.loads(text))
        assert jsonio.canonical_dumps(jsonio.instance_to_dict(back)) == text
        return back
    if isinstance(value, Schedule):
        text = jsonio.canonical_dumps(jsonio.schedule_to_dict(value))
        back = jsonio.schedule_from_dict(json.loads(text))
        assert jsonio.canonical_dumps(jsonio.schedule_to_dict(back)) == text
        return back
    if isinstance(value, RunReport):
        text = jsonio.canonical_dumps(value.to_dict())
        back = RunReport.from_dict(json.loads(text))
        assert jsonio.canonical_dumps(back.to_dict()) == text
        return back
    raise SolverError(f"cannot roundtrip values of type {type(value).__name__}")


# -- batch running -------------------------------------------------------------

@dataclass(frozen=True)
class RunSpec:
    n: int
    capacity: float
    seed: int
    variant: str
    direction: str = "ccw"
    improve: bool = False
    router_budget_s: Optional[float] = None

    @property
    def run_id(self) -> str:
        suffix = "imp" if self.improve else "raw"
        return (f"n{self.n}-c{self.capacity:g}-s{self.seed}"
                f"-{self.variant}-{self.direction}-{suffix}")


def run_one(spec: RunSpec) -> tuple[Optional[Schedule], RunReport]:
    instance = generate(GenConfig(n=spec.n, capacity=spec.capacity, seed=spec.seed))
    return run_pipeline(instance, spec.variant, spec.direction, spec.improve,
                        spec.router_budget_s, instance_id=spec.run_id)


def _run_one_report(spec: RunSpec) -> RunReport:
    return run_one(spec)[1]


def run_batch(specs, jobs: int = 1) -> list[RunReport]:
    """Run pipelines for every spec; per-run determinism is preserved
    under any parallelism because each run is self-contained."""
    specs = list(specs)
    if jobs <= 1:
        return [_run_one_report(s) for s in specs]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_one_report, specs))
