import random

import pytest

import sweepvrp.router as router_mod
from sweepvrp.model import DomainError, Tour, tour_objectives
from sweepvrp.router import (BUDGET_EXHAUSTED, FEASIBLE, INFEASIBLE,
                             MODE_FEASIBILITY, MODE_OPTIMIZE, RouterSession,
                             RoutingRequest, min_duration_for_sequence, solve)
from helpers import (cust, make_instance, random_router_cluster, windows)
from oracles import optimal_tour, time_sequence


def two_window_instance():
    """d -> a -> b collinear: t(d,a)=180, t(a,b)=180, t(b,d)=360."""
    wins = windows((0, 3600), (3600, 7200))
    a = cust(1, 180, 0, window=1, service=300)
    b = cust(2, 360, 0, window=2, service=300)
    return make_instance([a, b], wins)


def test_min_duration_two_window_example():
    inst = two_window_instance()
    a, b = inst.customers
    lam2, lam3, arrivals = min_duration_for_sequence([a, b], inst)
    assert lam2 == 1320  # 180 + 480 + 300 + 360
    assert lam3 == 720   # 180 + 180 + 360
    # canonical: latest feasible start, then earliest onward
    assert arrivals == (3600, 4080)
    # the naive earliest start waits out the whole first window
    naive, _ = tour_objectives(Tour((1, 2), (0, 3600)), inst)
    assert naive == 4440


def test_min_duration_no_wait_sequence():
    wins = windows((0, 3600))
    a = cust(1, 100, 0, window=1, service=300)
    b = cust(2, 200, 0, window=1, service=300)
    inst = make_instance([a, b], wins)
    lam2, lam3, arrivals = min_duration_for_sequence([a, b], inst)
    # chain is tight: duration equals the earliest-start duration
    assert arrivals[1] - arrivals[0] == 400
    assert lam2 == 100 + 400 + 300 + 200
    assert lam3 == 100 + 100 + 200


def test_min_duration_rejects_window_disorder():
    inst = two_window_instance()
    a, b = inst.customers
    assert min_duration_for_sequence([b, a], inst) is None


def test_min_duration_interior_wait_compression():
    # wait only at the third customer; delaying the start compresses it
    wins = windows((0, 500), (800, 1000))
    cs = [cust(1, 10, 0, window=1, service=50),
          cust(2, 20, 0, window=1, service=50),
          cust(3, 30, 0, window=2, service=50)]
    inst = make_instance(cs, wins)
    got = min_duration_for_sequence(cs, inst)
    expect = time_sequence(cs, inst)
    assert got is not None and expect is not None
    assert (got[0], got[1]) == (expect[0], expect[1])


@pytest.mark.parametrize("seed", range(10))
def test_min_duration_matches_start_enumeration(seed):
    rng = random.Random(100 + seed)
    for _ in range(25):
        inst = random_router_cluster(rng)
        seq = sorted(inst.customers, key=lambda c: (inst.window_order[c.window],
                                                    rng.random()))[:5]
        got = min_duration_for_sequence(seq, inst)
        expect = time_sequence(seq, inst)
        if expect is None:
            assert got is None
        else:
            assert got is not None
            assert (got[0], got[1]) == (expect[0], expect[1])


def test_solve_single_customer():
    wins = windows((600, 4200))
    a = cust(1, 250, 0, window=1, service=300)
    inst = make_instance([a], wins)
    res = solve(RoutingRequest((a,), inst, MODE_OPTIMIZE))
    assert res.status == FEASIBLE
    assert res.objective == (250 + 300 + 250, 500)


def test_solve_two_window_example_optimal():
    inst = two_window_instance()
    res = solve(RoutingRequest(inst.customers, inst, MODE_OPTIMIZE))
    assert res.status == FEASIBLE
    assert res.objective == (1320, 720)
    assert res.tour.customers == (1, 2)
    assert res.tour.arrivals == (3600, 4080)


def test_solve_same_window_pair_infeasible():
    wins = windows((0, 3600))
    a = cust(1, 0, 100, window=1, service=300)
    b = cust(2, 0, 4100, window=1, service=300)  # 4000 s apart
    inst = make_instance([a, b], wins)
    res = solve(RoutingRequest((a, b), inst, MODE_FEASIBILITY))
    assert res.status == INFEASIBLE


def test_solve_rejects_empty_request():
    inst = two_window_instance()
    with pytest.raises(DomainError):
        solve(RoutingRequest((), inst, MODE_FEASIBILITY))


@pytest.mark.parametrize("seed", range(8))
def test_solve_matches_oracle(seed):
    rng = random.Random(1000 + seed)
    for _ in range(6):
        inst = random_router_cluster(rng)
        res = solve(RoutingRequest(inst.customers, inst, MODE_OPTIMIZE))
        expect = optimal_tour(inst.customers, inst)
        if expect is None:
            assert res.status == INFEASIBLE
        else:
            assert res.status == FEASIBLE
            assert res.objective == expect


def test_window_respecting_enumeration_equals_full_enumeration():
    # independent confirmation that only window order matters
    rng = random.Random(77)
    checked = 0
    while checked < 15:
        inst = random_router_cluster(rng)
        if len(inst.customers) > 6:
            continue
        assert (optimal_tour(inst.customers, inst)
                == optimal_tour(inst.customers, inst, all_permutations=True))
        checked += 1


def test_feasible_tours_visit_windows_in_order():
    rng = random.Random(4242)
    found = 0
    attempts = 0
    while found < 1000 and attempts < 6000:
        attempts += 1
        inst = random_router_cluster(rng)
        res = solve(RoutingRequest(inst.customers, inst, MODE_OPTIMIZE))
        if res.status != FEASIBLE:
            continue
        found += 1
        order = [inst.window_order[inst.by_id[cid].window]
                 for cid in res.tour.customers]
        assert order == sorted(order)
        # and the tour itself satisfies every tour invariant
        for cid, arr in zip(res.tour.customers, res.tour.arrivals):
            w = inst.window_by_id[inst.by_id[cid].window]
            assert w.start <= arr <= w.end
        for i in range(len(res.tour.customers) - 1):
            a, b = res.tour.customers[i], res.tour.customers[i + 1]
            need = inst.by_id[a].service + inst.travel_ids(a, b)
            assert res.tour.arrivals[i + 1] - res.tour.arrivals[i] >= need
    assert found >= 1000


def test_resolving_returned_tour_is_stable():
    rng = random.Random(88)
    done = 0
    while done < 20:
        inst = random_router_cluster(rng)
        res = solve(RoutingRequest(inst.customers, inst, MODE_OPTIMIZE))
        if res.status != FEASIBLE:
            continue
        members = tuple(inst.by_id[cid] for cid in res.tour.customers)
        again = solve(RoutingRequest(members, inst, MODE_OPTIMIZE))
        assert again.objective == res.objective
        assert again.tour.customers == res.tour.customers
        done += 1


def test_bnb_fallback_matches_dp(monkeypatch):
    rng = random.Random(5150)
    checked = 0
    while checked < 12:
        inst = random_router_cluster(rng)
        if len(inst.customers) < 3:
            continue
        dp = solve(RoutingRequest(inst.customers, inst, MODE_OPTIMIZE))
        monkeypatch.setattr(router_mod, "DP_BLOCK_LIMIT", 1)
        bnb = solve(RoutingRequest(inst.customers, inst, MODE_OPTIMIZE))
        monkeypatch.undo()
        assert bnb.status == dp.status
        if dp.status == FEASIBLE:
            assert bnb.objective == dp.objective
        # feasibility mode must agree as well
        monkeypatch.setattr(router_mod, "DP_BLOCK_LIMIT", 1)
        feas = solve(RoutingRequest(inst.customers, inst, MODE_FEASIBILITY))
        monkeypatch.undo()
        assert feas.status == dp.status
        checked += 1


def test_budget_exhaustion(monkeypatch):
    inst = two_window_instance()
    monkeypatch.setattr(router_mod, "_BUDGET_CHECK_EVERY", 0)
    res = solve(RoutingRequest(inst.customers, inst, MODE_OPTIMIZE,
                               time_budget_s=0.0))
    assert res.status == BUDGET_EXHAUSTED
    assert res.tour is None


def test_session_memoizes_but_not_budget_failures(monkeypatch):
    inst = two_window_instance()
    session = RouterSession(inst)
    r1 = session.optimal(inst.customers)
    r2 = session.optimal(list(reversed(inst.customers)))
    assert r1 is r2
    assert session.solve_calls == 1
    # feasibility reuses the optimize memo
    assert session.feasible(inst.customers) is r1

    bad = RouterSession(inst, time_budget_s=0.0)
    monkeypatch.setattr(router_mod, "_BUDGET_CHECK_EVERY", 0)
    assert bad.optimal(inst.customers).status == BUDGET_EXHAUSTED
    assert bad.optimal(inst.customers).status == BUDGET_EXHAUSTED
    assert bad.solve_calls == 2
