"""Layered feasibility testing for candidate clusters.

Checks run cheapest-first: capacity, then the spanning-arborescence
necessary condition per window (tree-feasibility), and only then the
exact routing subsolver.  Verdicts are memoized by cluster identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

from .model import (Customer, DomainError, Instance, RouterBudgetError, Tour,
                    weight_milli)
from .router import BUDGET_EXHAUSTED, FEASIBLE as ROUTE_FEASIBLE

CAPACITY_INFEASIBLE = "capacity_infeasible"
TREE_INFEASIBLE = "tree_infeasible"
TIME_INFEASIBLE = "time_infeasible"
FEASIBLE = "feasible"


@dataclass
class FeasibilityVerdict:
    level: str
    witness: Optional[Tour] = None

    def __bool__(self):
        return self.level == FEASIBLE


def capacity_feasible(cluster: Iterable[Customer], capacity: float) -> bool:
    """Total order weight within capacity, in exact milli-unit arithmetic."""
    return sum(weight_milli(c.weight) for c in cluster) <= weight_milli(capacity)


def _rooted_arborescence_cost(n: int, edges: list[list[float]], root: int) -> float:
    """Cost of the minimum spanning arborescence rooted at `root`
    (Chu-Liu/Edmonds with repeated cycle contraction)."""
    inf = float("inf")
    total = 0.0
    while True:
        in_w = [inf] * n
        pre = list(range(n))
        for u, v, w in edges:
            if u != v and v != root and w < in_w[v]:
                in_w[v] = w
                pre[v] = u
        in_w[root] = 0.0
        if any(w is inf or w == inf for w in in_w):
            raise DomainError("arborescence graph is not connected to the root")
        total += sum(in_w)

        cycle_id = [-1] * n
        mark = [-1] * n
        cycles = 0
        for start in range(n):
            v = start
            while v != root and mark[v] == -1 and cycle_id[v] == -1:
                mark[v] = start
                v = pre[v]
            if v != root and cycle_id[v] == -1 and mark[v] == start:
                cycle_id[v] = cycles
                u = pre[v]
                while u != v:
                    cycle_id[u] = cycles
                    u = pre[u]
                cycles += 1
        if cycles == 0:
            return total
        for v in range(n):
            if cycle_id[v] == -1:
                cycle_id[v] = cycles
                cycles += 1
        contracted = []
        for u, v, w in edges:
            nu, nv = cycle_id[u], cycle_id[v]
            if nu != nv:
                contracted.append([nu, nv, w - in_w[v]])
        edges = contracted
        root = cycle_id[root]
        n = cycles


def min_arborescence_length(nodes: Sequence, weight: Callable) -> float:
    """Minimum, over all roots, of the minimum-weight spanning arborescence
    of the complete digraph on `nodes` under `weight(u, v)`."""
    nodes = list(nodes)
    n = len(nodes)
    if n == 0:
        raise DomainError("arborescence of an empty node set is undefined")
    if n == 1:
        return 0
    edges = [[i, j, weight(nodes[i], nodes[j])]
             for i in range(n) for j in range(n) if i != j]
    return min(_rooted_arborescence_cost(n, [e[:] for e in edges], root)
               for root in range(n))


def window_arborescence(members: Sequence[Customer], instance: Instance) -> float:
    """Arborescence length of one window's members with edge weight
    travel(u, v) + service(u)."""
    return min_arborescence_length(
        members,
        lambda u, v: instance.travel(u.location, v.location) + u.service,
    )


def tree_feasible(cluster: Iterable[Customer], instance: Instance,
                  arb_cache: Optional[dict] = None) -> bool:
    """Necessary condition for time-feasibility: every window's members
    admit a spanning arborescence no longer than the window."""
    by_window: dict[int, list[Customer]] = {}
    for c in cluster:
        by_window.setdefault(c.window, []).append(c)
    for wid, members in by_window.items():
        if len(members) < 2:
            continue
        window = instance.window_by_id[wid]
        if arb_cache is not None:
            key = tuple(sorted(c.id for c in members))
            length = arb_cache.get(key)
            if length is None:
                length = arb_cache[key] = window_arborescence(members, instance)
        else:
            length = window_arborescence(members, instance)
        if length > window.length:
            return False
    return True


class ClusterChecker:
    """check_cluster with verdict memoization for one solver run.

    `router` provides feasible(customers) -> RoutingResult; budget
    exhaustion is surfaced as RouterBudgetError, never as infeasible.
    """

    def __init__(self, instance: Instance, router):
        self.instance = instance
        self.router = router
        self._verdicts: dict[tuple[int, ...], FeasibilityVerdict] = {}
        self._arb_cache: dict[tuple[int, ...], float] = {}

    def check(self, cluster: Sequence[Customer]) -> FeasibilityVerdict:
        if not cluster:
            return FeasibilityVerdict(FEASIBLE)
        key = tuple(sorted(c.id for c in cluster))
        verdict = self._verdicts.get(key)
        if verdict is not None:
            return verdict
        if not capacity_feasible(cluster, self.instance.capacity):
            verdict = FeasibilityVerdict(CAPACITY_INFEASIBLE)
        elif not tree_feasible(cluster, self.instance, self._arb_cache):
            verdict = FeasibilityVerdict(TREE_INFEASIBLE)
        else:
            result = self.router.feasible(cluster)
            if result.status == BUDGET_EXHAUSTED:
                raise RouterBudgetError(
                    f"routing budget exhausted on cluster of {len(cluster)} customers")
            if result.status == ROUTE_FEASIBLE:
                verdict = FeasibilityVerdict(FEASIBLE, witness=result.tour)
            else:
                verdict = FeasibilityVerdict(TIME_INFEASIBLE)
        self._verdicts[key] = verdict
        return verdict

    def capacity_and_tree(self, cluster: Sequence[Customer]) -> bool:
        return (capacity_feasible(cluster, self.instance.capacity)
                and tree_feasible(cluster, self.instance, self._arb_cache))


def check_cluster(cluster: Sequence[Customer], instance: Instance,
                  router) -> FeasibilityVerdict:
    """One-shot layered check (capacity -> tree -> routing); use
    ClusterChecker when many related clusters are probed."""
    return ClusterChecker(instance, router).check(cluster)
