"""Local improvement of a clustering by single-customer boundary moves.

Every candidate nudges one window-dependent sector boundary so that
exactly one customer crosses into the neighbouring cluster.  The two
affected clusters are re-routed exactly; a move is kept only when the
lexicographic schedule objective strictly improves.  Scanning is
round-robin with first-improvement acceptance and stops after a full
rejecting pass.  Deleting an emptied cluster is the only way the
vehicle count can drop.
"""

from __future__ import annotations

from bisect import insort
from dataclasses import dataclass
from typing import Optional

from .feasibility import capacity_feasible, tree_feasible
from .geometry import TWO_PI
from .model import Customer, Instance, Objective, SolverError
from .router import FEASIBLE, RouterSession
from .sweep import GLOBAL_ANGLES, WINDOW_ANGLES, Clustering

DECREASE = "decrease"
INCREASE = "increase"


@dataclass
class MoveCandidate:
    boundary: int      # boundary index: between cluster i and i+1
    window: int        # window position (0-based)
    direction: str     # DECREASE or INCREASE
    customer: int      # id of the crossing customer
    source: int        # cluster index the customer leaves
    target: int        # cluster index the customer joins
    objective: tuple   # schedule objective after applying the move


class _State:
    def __init__(self, clustering: Clustering, instance: Instance,
                 router: RouterSession):
        self.instance = instance
        self.router = router
        self.view = clustering.view
        self.rank = clustering.view.rank
        q = len(instance.windows)
        if clustering.kind == GLOBAL_ANGLES:
            self.bmat = [[b] * q for b in clustering.boundaries]
        else:
            self.bmat = [list(row) for row in clustering.boundaries]
        self.clusters = [sorted(c, key=lambda x: self.rank[x.id])
                         for c in clustering.clusters]
        self.arb_cache: dict = {}
        self.contribs: list[tuple[int, int]] = []
        for members in self.clusters:
            result = router.optimal(members)
            if result.status != FEASIBLE:
                raise SolverError("improve() requires a feasible input clustering")
            self.contribs.append(result.objective)

    def objective(self) -> Objective:
        return Objective(len(self.clusters),
                         sum(c[0] for c in self.contribs),
                         sum(c[1] for c in self.contribs))

    def window_slice(self, i: int, wid: int) -> list[Customer]:
        return [c for c in self.clusters[i] if c.window == wid]

    def lower_bound(self, i: int, j: int) -> float:
        return self.bmat[i - 1][j] if i > 0 else 0.0


def _cluster_objective(router: RouterSession, members) -> Optional[tuple[int, int]]:
    result = router.optimal(members)
    if result.status != FEASIBLE:
        return None
    return result.objective


def improve(clustering: Clustering, instance: Instance, router: RouterSession,
            trace: Optional[list[MoveCandidate]] = None) -> Clustering:
    """Drive the clustering to a local minimum of the schedule objective.

    Inputs are never mutated.  Global-angle clusterings are first lifted
    to window-dependent angles (theta_i^j = theta_i).  Raises SolverError
    if the accepted-move count ever exceeds |C|^2, which would contradict
    the strict-decrease argument.
    """
    state = _State(clustering, instance, router)
    n = len(instance.customers)
    move_bound = max(n * n, 16)
    accepted = 0
    angles = state.view.angles

    pos = 0
    rejected_streak = 0
    candidates = _candidates(state)
    while candidates and rejected_streak < len(candidates):
        if pos >= len(candidates):
            pos = 0
        i, j, direction = candidates[pos]
        move = _evaluate(state, i, j, direction)
        if move is None:
            rejected_streak += 1
            pos += 1
            continue
        _apply(state, move, angles)
        accepted += 1
        if accepted > move_bound:
            raise SolverError(
                f"local improvement exceeded the {move_bound} accepted-move bound")
        if trace is not None:
            trace.append(move)
        rejected_streak = 0
        pos += 1
        candidates = _candidates(state)

    return Clustering(WINDOW_ANGLES, state.bmat, state.clusters, state.view)


def _candidates(state: _State):
    m = len(state.clusters)
    q = len(state.instance.windows)
    return [(i, j, d)
            for i in range(m - 1)
            for j in range(q)
            for d in (DECREASE, INCREASE)]


def _evaluate(state: _State, i: int, j: int, direction: str) -> Optional[MoveCandidate]:
    """Virtually move the boundary customer and price the result; returns
    an applicable move on strict improvement, else None (state untouched)."""
    wid = state.instance.windows[j].id
    if direction == DECREASE:
        src, dst = i, i + 1
        slice_ = state.window_slice(src, wid)
        if not slice_:
            return None
        customer = slice_[-1]
    else:
        src, dst = i + 1, i
        slice_ = state.window_slice(src, wid)
        if not slice_:
            return None
        customer = slice_[0]

    new_dst = state.clusters[dst] + [customer]
    if not capacity_feasible(new_dst, state.instance.capacity):
        return None
    if not tree_feasible(new_dst, state.instance, state.arb_cache):
        return None
    dst_obj = _cluster_objective(state.router, new_dst)
    if dst_obj is None:
        return None
    new_src = [c for c in state.clusters[src] if c.id != customer.id]
    if new_src:
        src_obj = _cluster_objective(state.router, new_src)
        if src_obj is None:
            return None
        vehicles = len(state.clusters)
    else:
        src_obj = (0, 0)
        vehicles = len(state.clusters) - 1

    old = state.objective()
    duration = old.duration_s - state.contribs[src][0] - state.contribs[dst][0] \
        + src_obj[0] + dst_obj[0]
    travel = old.travel_s - state.contribs[src][1] - state.contribs[dst][1] \
        + src_obj[1] + dst_obj[1]
    new = Objective(vehicles, duration, travel)
    if not tuple(new) < tuple(old):
        return None
    return MoveCandidate(i, j, direction, customer.id, src, dst, tuple(new))


def _apply(state: _State, move: MoveCandidate, angles: dict[int, float]):
    i, j = move.boundary, move.window
    wid = state.instance.windows[j].id
    customer = state.instance.by_id[move.customer]

    state.clusters[move.source].remove(customer)
    insort(state.clusters[move.target], customer, key=lambda c: state.rank[c.id])

    if move.direction == DECREASE:
        rest = state.window_slice(i, wid)
        state.bmat[i][j] = ((angles[rest[-1].id] + angles[customer.id]) / 2.0
                            if rest else state.lower_bound(i, j))
    else:
        rest = state.window_slice(i + 1, wid)
        state.bmat[i][j] = ((angles[customer.id] + angles[rest[0].id]) / 2.0
                            if rest else state.bmat[i + 1][j])

    state.contribs[move.target] = _cluster_objective(
        state.router, state.clusters[move.target])
    if state.clusters[move.source]:
        state.contribs[move.source] = _cluster_objective(
            state.router, state.clusters[move.source])
    else:
        del state.clusters[move.source]
        del state.contribs[move.source]
        del state.bmat[move.source]

    assert tuple(state.objective()) == move.objective
