"""Exact single-tour routing over structured time windows.

Non-overlapping windows force every feasible tour to visit customers in
non-decreasing window order, so the search space is the product of
per-window permutations.  The solver chains a Held-Karp style dynamic
program across windows.

For a fixed prefix ending at customer u, the arrival at u as a function
of the tour's first arrival alpha_1 is max(A, alpha_1 + B) where A is the
window-forced earliest arrival, B the accumulated service+travel chain
(including the depot leg, shifted onto the start variable), and alpha_1
is bounded above by L (latest start keeping every window end reachable).
Extending the prefix by v with gap d = service(u) + travel(u, v):

    A' = max(window_start(v), A + d)      infeasible when A' > window_end(v)
    B' = B + d
    L' = min(L, window_end(v) - B')

Duration plus the outbound depot leg of a complete sequence is
max(A - L, B); the tour travel time is recovered from B.  Per DP state
(window, visited subset, last customer) only Pareto-undominated
(A, B, L) triples are kept: componentwise (<=, <=, >=) domination is
exact for the lexicographic (duration, travel) objective.

A depth-first branch-and-bound over the same state algebra handles
window blocks too large for subset enumeration.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional, Sequence

from .model import Customer, DomainError, Instance, Tour

MODE_FEASIBILITY = "feasibility"
MODE_OPTIMIZE = "optimize"

FEASIBLE = "feasible"
INFEASIBLE = "infeasible"
BUDGET_EXHAUSTED = "budget_exhausted"

# Window blocks above this size skip the subset DP and use branch and bound.
DP_BLOCK_LIMIT = 16

_BUDGET_CHECK_EVERY = 2048


class _BudgetExceeded(Exception):
    pass


@dataclass
class RoutingRequest:
    customers: tuple[Customer, ...]
    instance: Instance
    mode: str = MODE_FEASIBILITY
    time_budget_s: Optional[float] = None


@dataclass
class RoutingResult:
    status: str
    tour: Optional[Tour] = None
    objective: Optional[tuple[int, int]] = None  # (duration_s, travel_s)


def min_duration_for_sequence(sequence: Sequence[Customer], instance: Instance):
    """Minimum-duration timing of a fixed visit sequence.

    Returns (duration_s, travel_s, arrivals) or None when the sequence is
    infeasible (wrong window order or an unavoidable window miss).
    Arrivals are canonical: latest feasible start, then earliest onward.
    """
    seq = list(sequence)
    if not seq:
        raise DomainError("cannot time an empty sequence")
    worder = instance.window_order
    windows = [instance.window_by_id[c.window] for c in seq]
    for prev, cur in zip(seq, seq[1:]):
        if worder[prev.window] > worder[cur.window]:
            return None

    k = len(seq)
    gaps = [seq[i].service + instance.travel(seq[i].location, seq[i + 1].location)
            for i in range(k - 1)]

    earliest = windows[0].start
    for i in range(1, k):
        earliest = max(windows[i].start, earliest + gaps[i - 1])
        if earliest > windows[i].end:
            return None

    latest = windows[-1].end
    for i in range(k - 2, -1, -1):
        latest = min(windows[i].end, latest - gaps[i])
    assert latest >= windows[0].start

    arrivals = [latest]
    for i in range(1, k):
        arrivals.append(max(windows[i].start, arrivals[-1] + gaps[i - 1]))

    t_out = instance.travel(instance.depot, seq[0].location)
    t_back = instance.travel(seq[-1].location, instance.depot)
    duration = t_out + (arrivals[-1] - arrivals[0]) + seq[-1].service + t_back
    travel = t_out + sum(gaps) - sum(c.service for c in seq[:-1]) + t_back
    return duration, travel, tuple(arrivals)


def _window_blocks(customers: Sequence[Customer], instance: Instance):
    """Customers grouped by window in window order; ids sorted within."""
    worder = instance.window_order
    by_window: dict[int, list[Customer]] = {}
    for c in customers:
        by_window.setdefault(worder[c.window], []).append(c)
    blocks = []
    for wpos in sorted(by_window):
        members = sorted(by_window[wpos], key=lambda c: c.id)
        blocks.append((instance.windows[wpos], members))
    return blocks


def solve(request: RoutingRequest) -> RoutingResult:
    """Decide time-feasibility of a customer set or compute its optimal
    tour under the lexicographic (duration, travel) objective."""
    customers = tuple(request.customers)
    if not customers:
        raise DomainError("routing request needs at least one customer")
    instance = request.instance
    for c in customers:
        if instance.by_id.get(c.id) is not c and c.id not in instance.by_id:
            raise DomainError(f"customer {c.id} does not belong to the instance")

    deadline = None
    if request.time_budget_s is not None:
        deadline = time.perf_counter() + request.time_budget_s

    blocks = _window_blocks(customers, instance)
    try:
        if max(len(m) for _, m in blocks) > DP_BLOCK_LIMIT:
            seq = _search_bnb(blocks, instance, request.mode, deadline)
        else:
            seq = _search_dp(blocks, instance, request.mode, deadline)
    except _BudgetExceeded:
        return RoutingResult(BUDGET_EXHAUSTED)

    if seq is None:
        return RoutingResult(INFEASIBLE)
    timed = min_duration_for_sequence(seq, instance)
    assert timed is not None
    duration, travel, arrivals = timed
    tour = Tour(tuple(c.id for c in seq), arrivals)
    return RoutingResult(FEASIBLE, tour=tour, objective=(duration, travel))


def _check_deadline(deadline, counter):
    if deadline is not None and counter[0] <= 0:
        counter[0] = _BUDGET_CHECK_EVERY
        if time.perf_counter() > deadline:
            raise _BudgetExceeded
    counter[0] -= 1


# ---------------------------------------------------------------------------
# Subset dynamic program

def _push_triple(entries, A, B, L, prev, cust):
    for e in entries:
        if e[0] <= A and e[1] <= B and e[2] >= L:
            return
    entries[:] = [e for e in entries if not (A <= e[0] and B <= e[1] and L >= e[2])]
    entries.append((A, B, L, prev, cust))


def _search_dp(blocks, instance, mode, deadline):
    """Returns the optimal (or any witness) visit sequence, or None."""
    depot = instance.depot
    travel = instance.travel
    counter = [_BUDGET_CHECK_EVERY]
    feasibility_only = mode == MODE_FEASIBILITY

    # carry: entries per last customer after all blocks processed so far.
    # Entry = (A, B, L, prev_entry, customer); feasibility keeps one per last.
    carry: Optional[dict[int, list]] = None
    carry_members: dict[int, Customer] = {}

    for window, members in blocks:
        k = len(members)
        ws, we = window.start, window.end
        loc = [c.location for c in members]
        svc = [c.service for c in members]
        tt = [[travel(loc[i], loc[j]) if i != j else 0 for j in range(k)]
              for i in range(k)]

        states: dict[tuple[int, int], list] = {}
        if carry is None:
            for i, c in enumerate(members):
                b = travel(depot, loc[i])
                _push_triple(states.setdefault((1 << i, i), []),
                             ws, b, we - b, None, c)
        else:
            for ucid in sorted(carry):
                u = carry_members[ucid]
                for entry in carry[ucid]:
                    for i, c in enumerate(members):
                        d = u.service + travel(u.location, loc[i])
                        a2 = entry[0] + d
                        if a2 < ws:
                            a2 = ws
                        elif a2 > we:
                            continue
                        b2 = entry[1] + d
                        _push_triple(states.setdefault((1 << i, i), []),
                                     a2, b2, min(entry[2], we - b2), entry, c)
        if not states:
            return None

        if feasibility_only:
            for entries in states.values():
                entries.sort(key=lambda e: e[0])  # keep the earliest arrival only
                del entries[1:]

        full = (1 << k) - 1
        for mask in range(1, full + 1):
            for last in range(k):
                if not (mask >> last) & 1:
                    continue
                entries = states.get((mask, last))
                if not entries:
                    continue
                _check_deadline(deadline, counter)
                trow = tt[last]
                sv = svc[last]
                j = 0
                restbits = full & ~mask
                while restbits:
                    if restbits & 1:
                        d = sv + trow[j]
                        key = (mask | (1 << j), j)
                        tgt = states.get(key)
                        cj = members[j]
                        for entry in entries:
                            a2 = entry[0] + d
                            if a2 < ws:
                                a2 = ws
                            elif a2 > we:
                                continue
                            if feasibility_only:
                                if tgt is None:
                                    tgt = states[key] = [
                                        (a2, entry[1], entry[2], entry, cj)]
                                elif a2 < tgt[0][0]:
                                    tgt[0] = (a2, entry[1], entry[2], entry, cj)
                                continue
                            b2 = entry[1] + d
                            l2 = we - b2
                            if entry[2] < l2:
                                l2 = entry[2]
                            if tgt is None:
                                tgt = states[key] = [(a2, b2, l2, entry, cj)]
                                continue
                            # inline Pareto insertion (hot path)
                            for e in tgt:
                                if e[0] <= a2 and e[1] <= b2 and e[2] >= l2:
                                    break
                            else:
                                keep = 0
                                for e in tgt:
                                    if not (a2 <= e[0] and b2 <= e[1] and l2 >= e[2]):
                                        tgt[keep] = e
                                        keep += 1
                                del tgt[keep:]
                                tgt.append((a2, b2, l2, entry, cj))
                    restbits >>= 1
                    j += 1

        carry = {}
        carry_members = {c.id: c for c in members}
        for i, c in enumerate(members):
            entries = states.get((full, i))
            if entries:
                carry[c.id] = entries
        if not carry:
            return None

    return _pick_final(carry, carry_members, instance, mode)


def _pick_final(carry, carry_members, instance, mode):
    depot = instance.depot
    total_service = None
    best = None
    best_entry = None
    for cid in sorted(carry):
        c = carry_members[cid]
        t_back = instance.travel(c.location, depot)
        for entry in carry[cid]:
            if mode == MODE_FEASIBILITY:
                best_entry = entry
                break
            if total_service is None:
                total_service = _chain_service_total(entry)
            a, b, latest = entry[0], entry[1], entry[2]
            lam2 = max(a - latest, b) + c.service + t_back
            lam3 = b - (total_service - c.service) + t_back
            if best is None or (lam2, lam3) < best:
                best = (lam2, lam3)
                best_entry = entry
        if mode == MODE_FEASIBILITY and best_entry is not None:
            break
    if best_entry is None:
        return None
    seq = []
    entry = best_entry
    while entry is not None:
        seq.append(entry[4])
        entry = entry[3]
    seq.reverse()
    return seq


def _chain_service_total(entry):
    total = 0
    while entry is not None:
        total += entry[4].service
        entry = entry[3]
    return total


# ---------------------------------------------------------------------------
# Branch-and-bound fallback for oversized window blocks

def _search_bnb(blocks, instance, mode, deadline):
    from .feasibility import min_arborescence_length  # lazy: feasibility imports router

    depot = instance.depot
    travel = instance.travel
    counter = [_BUDGET_CHECK_EVERY]
    everyone = [c for _, members in blocks for c in members]
    total_service = sum(c.service for c in everyone)

    # Admissible per-customer travel lower bounds for the duration bound.
    min_in = {}
    for v in everyone:
        min_in[v.id] = min(travel(u.location, v.location)
                           for u in everyone if u.id != v.id) if len(everyone) > 1 else 0
    final_members = blocks[-1][1]
    min_return = min(travel(v.location, depot) for v in final_members)
    min_end = min(v.service + travel(v.location, depot) for v in final_members)

    arb_cache: dict[int, float] = {}

    def block_bound(bi):
        if bi not in arb_cache:
            members = blocks[bi][1]
            arb_cache[bi] = min_arborescence_length(
                members,
                lambda u, v: u.service + travel(u.location, v.location),
            ) if len(members) > 1 else 0
        return arb_cache[bi]

    best: list = [None, None]  # [(lam2, lam3), sequence]

    def complete(a, b, latest, last, seq):
        t_back = travel(last.location, depot)
        lam2 = max(a - latest, b) + last.service + t_back
        lam3 = b - (total_service - last.service) + t_back
        if best[0] is None or (lam2, lam3) < best[0]:
            best[0] = (lam2, lam3)
            best[1] = list(seq)

    def descend(bi, remaining, a, b, latest, last, rem_service, rem_travel, seq):
        _check_deadline(deadline, counter)
        if mode == MODE_FEASIBILITY and best[0] is not None:
            return
        if not remaining:
            if bi + 1 == len(blocks):
                complete(a, b, latest, last, seq)
                return
            nxt = bi + 1
            window, members = blocks[nxt]
            arb = block_bound(nxt)
            for v in members:
                d = last.service + travel(last.location, v.location)
                a2 = max(window.start, a + d)
                if a2 > window.end or a2 + arb > window.end:
                    continue
                enter(nxt, members, v, a2, b + d, latest, rem_service, rem_travel, seq)
            return
        window = blocks[bi][0]
        for v in remaining:
            d = last.service + travel(last.location, v.location)
            a2 = max(window.start, a + d)
            if a2 > window.end:
                continue
            enter(bi, remaining, v, a2, b + d, latest, rem_service, rem_travel, seq)

    def enter(bi, pool, v, a2, b2, latest, rem_service, rem_travel, seq):
        # rem_service / rem_travel include v's own share on entry
        window = blocks[bi][0]
        latest2 = min(latest, window.end - b2)
        rs = rem_service - v.service
        rt = rem_travel - min_in[v.id]
        if mode == MODE_OPTIMIZE and best[0] is not None:
            bound = max(b2 + v.service + rs + rt + min_return,
                        (a2 - latest2) + min_end)
            if bound > best[0][0]:
                return
        seq.append(v)
        descend(bi, [u for u in pool if u.id != v.id], a2, b2, latest2, v,
                rs, rt, seq)
        seq.pop()

    window0, members0 = blocks[0]
    arb0 = block_bound(0)
    rem_travel0 = sum(min_in.values())
    if window0.start + arb0 <= window0.end:
        for v in members0:
            b0 = travel(depot, v.location)
            enter(0, members0, v, window0.start, b0, window0.end - b0,
                  total_service, rem_travel0, [])
            if mode == MODE_FEASIBILITY and best[0] is not None:
                break

    return best[1]


# ---------------------------------------------------------------------------

class RouterSession:
    """Memoizing facade over solve() for one solver run.

    Feasibility and optimization verdicts are cached by cluster identity
    (sorted customer ids).  Budget-exhausted outcomes are never cached.
    """

    def __init__(self, instance: Instance, time_budget_s: Optional[float] = None):
        self.instance = instance
        self.time_budget_s = time_budget_s
        self._feasible: dict[tuple[int, ...], RoutingResult] = {}
        self._optimal: dict[tuple[int, ...], RoutingResult] = {}
        self.solve_calls = 0

    def _key(self, customers) -> tuple[int, ...]:
        return tuple(sorted(c.id for c in customers))

    def feasible(self, customers) -> RoutingResult:
        key = self._key(customers)
        hit = self._optimal.get(key) or self._feasible.get(key)
        if hit is not None:
            return hit
        self.solve_calls += 1
        result = solve(RoutingRequest(tuple(customers), self.instance,
                                      MODE_FEASIBILITY, self.time_budget_s))
        if result.status != BUDGET_EXHAUSTED:
            self._feasible[key] = result
        return result

    def optimal(self, customers) -> RoutingResult:
        key = self._key(customers)
        hit = self._optimal.get(key)
        if hit is not None:
            return hit
        self.solve_calls += 1
        result = solve(RoutingRequest(tuple(customers), self.instance,
                                      MODE_OPTIMIZE, self.time_budget_s))
        if result.status != BUDGET_EXHAUSTED:
            self._optimal[key] = result
        return result
