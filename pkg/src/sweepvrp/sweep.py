"""Sweep clustering: the traditional capacity-only sweep plus three
time-window-aware variants, and the run-both-directions wrapper.

All variants walk customers in the polar view's angular order and record
sector boundaries at the midpoint between the last admitted and the
first rejected customer's angles, so boundaries never coincide with a
customer (barring exact angle ties).
"""

from __future__ import annotations

from bisect import insort
from dataclasses import dataclass
from typing import Optional

from .feasibility import ClusterChecker
from .geometry import CCW, CW, TWO_PI, PolarView, polar_view, sector, sector_w
from .model import (Customer, Instance, InfeasibleInstanceError, Objective,
                    RouterBudgetError, Schedule, SolverError,
                    schedule_objective, weight_milli)
from .router import FEASIBLE, RouterSession

GLOBAL_ANGLES = "global_angles"
WINDOW_ANGLES = "window_angles"


@dataclass
class Clustering:
    """Customer partition induced by sector boundaries.

    `boundaries` holds each cluster's upper angle: a flat list for
    global-angle clusterings, a per-cluster per-window matrix for
    window-angle ones.  Lower bounds are the previous cluster's upper
    (0 for the first cluster); the last cluster always ends at 2*pi.
    """

    kind: str
    boundaries: list
    clusters: list[list[Customer]]
    view: PolarView

    def ids(self) -> list[list[int]]:
        return [[c.id for c in cluster] for cluster in self.clusters]


def clusters_from_boundaries(clustering: Clustering, instance: Instance) -> list[list[int]]:
    """Rebuild the partition from recorded boundaries alone (via sector
    queries); used to verify angle-boundary consistency."""
    view = clustering.view
    out = []
    if clustering.kind == GLOBAL_ANGLES:
        lower = 0.0
        for upper in clustering.boundaries:
            out.append([c.id for c in sector(instance.customers, lower, upper, view)])
            lower = upper
        return out
    for i, row in enumerate(clustering.boundaries):
        members: list[Customer] = []
        for j, window in enumerate(instance.windows):
            lower = clustering.boundaries[i - 1][j] if i > 0 else 0.0
            members.extend(sector_w(instance.customers, window.id, lower, row[j], view))
        members.sort(key=lambda c: view.rank[c.id])
        out.append([c.id for c in members])
    return out


def _mid(a: float, b: float) -> float:
    return (a + b) / 2.0


def _ordered_customers(instance: Instance, view: PolarView) -> list[Customer]:
    return [instance.by_id[cid] for cid in view.order]


def traditional_sweep(instance: Instance, view: PolarView) -> Clustering:
    """Capacity-only sweep: grow each sector until the next customer
    would overflow the vehicle.  Time windows are ignored entirely."""
    ordered = _ordered_customers(instance, view)
    cap = weight_milli(instance.capacity)
    clusters: list[list[Customer]] = []
    bounds: list[float] = []
    i = 0
    while i < len(ordered):
        members = [ordered[i]]
        load = weight_milli(ordered[i].weight)
        i += 1
        while i < len(ordered) and load + weight_milli(ordered[i].weight) <= cap:
            load += weight_milli(ordered[i].weight)
            members.append(ordered[i])
            i += 1
        bounds.append(TWO_PI if i == len(ordered)
                      else _mid(view.angles[members[-1].id], view.angles[ordered[i].id]))
        clusters.append(members)
    return Clustering(GLOBAL_ANGLES, bounds, clusters, view)


def sweep_variant_a(instance: Instance, view: PolarView,
                    router: RouterSession) -> Clustering:
    """Feasibility sweep: same advancing rule as the traditional sweep,
    but a customer is admitted only while the grown cluster passes the
    full capacity/tree/routing check."""
    checker = ClusterChecker(instance, router)
    ordered = _ordered_customers(instance, view)
    clusters: list[list[Customer]] = []
    bounds: list[float] = []
    i = 0
    while i < len(ordered):
        first = ordered[i]
        verdict = checker.check([first])
        if not verdict:
            raise InfeasibleInstanceError(first.id, verdict.level)
        members = [first]
        i += 1
        while i < len(ordered) and checker.check(members + [ordered[i]]):
            members.append(ordered[i])
            i += 1
        bounds.append(TWO_PI if i == len(ordered)
                      else _mid(view.angles[members[-1].id], view.angles[ordered[i].id]))
        clusters.append(members)
    return Clustering(GLOBAL_ANGLES, bounds, clusters, view)


def sweep_variant_b(instance: Instance, view: PolarView,
                    router: RouterSession) -> Clustering:
    """Window-wise sweep: distribute each window's customers over the
    clusters in turn, making every window-dependent angle as large as
    feasibility allows; grow the cluster list when a window's customers
    are left over."""
    checker = ClusterChecker(instance, router)
    by_rank = _ordered_customers(instance, view)
    clusters: list[list[Customer]] = []
    bmat: list[list[float]] = []

    for j, window in enumerate(instance.windows):
        members = [c for c in by_rank if c.window == window.id]
        pos = 0
        i = 0
        lower = 0.0
        while pos < len(members):
            if i == len(clusters):
                clusters.append([])
                bmat.append([TWO_PI] * j)
            admitted_last: Optional[Customer] = None
            while pos < len(members):
                cand = members[pos]
                if not clusters[i]:
                    verdict = checker.check([cand])
                    if not verdict:
                        raise InfeasibleInstanceError(cand.id, verdict.level)
                elif not checker.check(clusters[i] + [cand]):
                    break
                clusters[i].append(cand)
                admitted_last = cand
                pos += 1
            if pos == len(members):
                upper = TWO_PI
            elif admitted_last is None:
                upper = lower
            else:
                upper = _mid(view.angles[admitted_last.id], view.angles[members[pos].id])
            bmat[i].append(upper)
            lower = upper
            i += 1
        for r in range(i, len(clusters)):
            bmat[r].append(TWO_PI)

    return Clustering(WINDOW_ANGLES, bmat, clusters, view)


class _VariantC:
    """Tree-initialized sweep with per-window angle adjustment."""

    def __init__(self, instance: Instance, view: PolarView, router: RouterSession):
        self.instance = instance
        self.view = view
        self.checker = ClusterChecker(instance, router)
        self.clusters: list[list[Customer]] = []
        self.bmat: list[list[float]] = []
        self.bounds: list[float] = []  # working theta_i^j for the current window
        self.window_id: Optional[int] = None

    # -- phase 1: capacity- and tree-feasible global sectors -------------

    def phase1_bounds(self) -> list[float]:
        ordered = _ordered_customers(self.instance, self.view)
        bounds = []
        i = 0
        while i < len(ordered):
            members = [ordered[i]]
            i += 1
            while i < len(ordered) and self.checker.capacity_and_tree(members + [ordered[i]]):
                members.append(ordered[i])
                i += 1
            bounds.append(TWO_PI if i == len(ordered)
                          else _mid(self.view.angles[members[-1].id],
                                    self.view.angles[ordered[i].id]))
        return bounds

    # -- phase 2 helpers --------------------------------------------------

    def _rank(self, c: Customer) -> int:
        return self.view.rank[c.id]

    def _window_members(self, i: int) -> list[Customer]:
        return [c for c in self.clusters[i] if c.window == self.window_id]

    def _insert(self, i: int, c: Customer):
        insort(self.clusters[i], c, key=self._rank)

    def _lower(self, i: int) -> float:
        return self.bounds[i - 1] if i > 0 else 0.0

    def _feasible(self, i: int) -> bool:
        return bool(self.checker.check(self.clusters[i]))

    def _shift_down(self, i: int) -> bool:
        """Try making cluster i feasible by moving its leading window-j
        customers into earlier clusters; reverts everything on failure."""
        snapshot = ([list(c) for c in self.clusters], list(self.bounds))
        guard = len(self.instance.customers) * max(1, len(self.clusters)) + 1
        while not self._feasible(i):
            guard -= 1
            if guard < 0:
                raise SolverError("angle adjustment failed to converge")
            if not self._push_one(i):
                self.clusters[:] = snapshot[0]
                self.bounds[:] = snapshot[1]
                return False
        return True

    def _push_one(self, i: int) -> bool:
        """Move the leading window-j member of cluster i into cluster i-1,
        recursively making room below when needed."""
        if i == 0:
            return False
        wj = self._window_members(i)
        if not wj:
            return False
        lead = wj[0]
        while not self.checker.check(self.clusters[i - 1] + [lead]):
            if not self._push_one(i - 1):
                return False
        self.clusters[i].remove(lead)
        self._insert(i - 1, lead)
        rest = self._window_members(i)
        self.bounds[i - 1] = (_mid(self.view.angles[lead.id], self.view.angles[rest[0].id])
                              if rest else self.bounds[i])
        return True

    def _defer_forward(self, i: int):
        """Decrease theta_i^j: hand trailing window-j customers of cluster
        i over to cluster i+1 until cluster i is feasible."""
        while not self._feasible(i):
            wj = self._window_members(i)
            if not wj:
                raise SolverError(
                    f"cluster {i} infeasible without window-{self.window_id} members")
            trailing = wj[-1]
            self.clusters[i].remove(trailing)
            if i + 1 == len(self.clusters):
                self.clusters.append([])
                self.bmat.append([TWO_PI] * (len(self.bmat[0]) if self.bmat else 0))
                self.bounds.append(TWO_PI)
            self._insert(i + 1, trailing)
            rest = self._window_members(i)
            self.bounds[i] = (_mid(self.view.angles[rest[-1].id],
                                   self.view.angles[trailing.id])
                              if rest else self._lower(i))

    def run(self) -> Clustering:
        phase1 = self.phase1_bounds()
        if not phase1:
            return Clustering(WINDOW_ANGLES, [], [], self.view)
        self.clusters = [[] for _ in phase1]
        self.bmat = [[] for _ in phase1]
        prev_bounds = list(phase1)
        by_rank = _ordered_customers(self.instance, self.view)

        for window in self.instance.windows:
            self.window_id = window.id
            self.bounds = list(prev_bounds)
            members = [c for c in by_rank if c.window == window.id]
            ci = 0
            for c in members:
                while self.view.angles[c.id] >= self.bounds[ci]:
                    ci += 1
                self._insert(ci, c)
            i = 0
            while i < len(self.clusters):
                if self.clusters[i] and not self._feasible(i):
                    if not self._shift_down(i):
                        self._defer_forward(i)
                i += 1
            prev_bounds = list(self.bounds)
            for r, b in enumerate(self.bounds):
                self.bmat[r].append(b)

        # drop clusters the adjustments drained completely
        keep = [k for k, members in enumerate(self.clusters) if members]
        clusters = [self.clusters[k] for k in keep]
        bmat = [self.bmat[k] for k in keep]
        return Clustering(WINDOW_ANGLES, bmat, clusters, self.view)


def sweep_variant_c(instance: Instance, view: PolarView,
                    router: RouterSession) -> Clustering:
    """Two-phase sweep: capacity- and tree-feasible global sectors first,
    then window-by-window placement with backward/forward angle repair."""
    return _VariantC(instance, view, router).run()


VARIANTS = {
    "traditional": traditional_sweep,
    "a": sweep_variant_a,
    "b": sweep_variant_b,
    "c": sweep_variant_c,
}


def run_sweep(instance: Instance, variant: str, view: PolarView,
              router: RouterSession) -> Clustering:
    try:
        fn = VARIANTS[variant]
    except KeyError:
        raise SolverError(f"unknown sweep variant {variant!r}") from None
    if variant == "traditional":
        return fn(instance, view)
    return fn(instance, view, router)


def route_clustering(clustering: Clustering, instance: Instance,
                     router: RouterSession) -> tuple[Schedule, Objective]:
    """Step 3: optimal route per cluster, then the schedule objective."""
    tours = []
    for members in clustering.clusters:
        result = router.optimal(members)
        if result.status != FEASIBLE:
            raise SolverError(
                f"cluster of {len(members)} customers cannot be routed "
                f"({result.status})")
        tours.append(result.tour)
    schedule = Schedule(tours)
    return schedule, schedule_objective(schedule, instance)


def best_of_directions(instance: Instance, variant: str,
                       time_budget_s: Optional[float] = None) -> Clustering:
    """Run a sweep variant in both directions and keep the clustering
    whose routed schedule has the lexicographically smaller objective;
    counterclockwise wins ties."""
    best = None
    best_key = None
    for direction in (CCW, CW):
        session = RouterSession(instance, time_budget_s)
        view = polar_view(instance, direction)
        clustering = run_sweep(instance, variant, view, session)
        try:
            _, objective = route_clustering(clustering, instance, session)
            key = (0, tuple(objective))
        except RouterBudgetError:
            raise
        except SolverError:
            key = (1,)  # unroutable (possible for the traditional sweep)
        if best is None or key < best_key:
            best = clustering
            best_key = key
    return best
