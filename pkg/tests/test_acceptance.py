"""Acceptance criteria for the full toolkit.

One test per criterion; each prints an `ACCEPTANCE <k>: PASS/FAIL` line
(visible with `pytest tests/test_acceptance.py -s`).  The batch criteria
share module-scoped fixtures, so the suite runs every pipeline
configuration exactly once.
"""

import math
import os
import random
import time

import pytest

from sweepvrp.bench import RunSpec, run_batch, run_pipeline
from sweepvrp.feasibility import min_arborescence_length, tree_feasible
from sweepvrp.gen import GenConfig, generate, uniform_location_count
from sweepvrp.jsonio import canonical_dumps, instance_to_dict
from sweepvrp.model import weight_milli
from sweepvrp.router import (MODE_FEASIBILITY, MODE_OPTIMIZE, RoutingRequest,
                             solve)
from helpers import cust, make_instance, random_router_cluster, windows
from oracles import brute_force_arborescence, optimal_tour

pytestmark = pytest.mark.acceptance

JOBS = max(1, min(4, os.cpu_count() or 1))


def _verdict(name, ok, detail=""):
    print(f"\nACCEPTANCE {name}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"acceptance criterion {name} failed: {detail}"


# -- criterion 1: router oracle equivalence ----------------------------------

def test_criterion_1_router_oracle_equivalence():
    rng = random.Random(20260810)
    t0 = time.perf_counter()
    for k in range(200):
        inst = random_router_cluster(rng)
        res = solve(RoutingRequest(inst.customers, inst, MODE_OPTIMIZE))
        got = res.objective if res.status == "feasible" else None
        expect = optimal_tour(inst.customers, inst)
        if got != expect:
            _verdict("1 router-oracle", False,
                     f"cluster {k}: solver {got} vs oracle {expect}")
    elapsed = time.perf_counter() - t0
    _verdict("1 router-oracle", elapsed < 120.0,
             f"200/200 clusters exact, {elapsed:.1f}s")


# -- criterion 2: arborescence correctness ------------------------------------

def test_criterion_2_arborescence_vs_bruteforce():
    rng = random.Random(4711)
    for k in range(200):
        n = rng.randint(2, 5)
        weights = [[0 if i == j else rng.randint(1, 50) for j in range(n)]
                   for i in range(n)]
        got = min_arborescence_length(list(range(n)), lambda u, v: weights[u][v])
        expect = brute_force_arborescence(weights)
        if got != expect:
            _verdict("2 arborescence", False,
                     f"digraph {k} (n={n}): {got} vs {expect}")
    _verdict("2 arborescence", True, "200/200 digraphs exact")


# -- criterion 3: tree-feasibility necessity ----------------------------------

def test_criterion_3_tree_feasibility_necessary_not_sufficient():
    rng = random.Random(333)
    feasible_found = 0
    attempts = 0
    while feasible_found < 500:
        attempts += 1
        assert attempts < 20000, "generator failed to produce feasible clusters"
        inst = random_router_cluster(rng)
        res = solve(RoutingRequest(inst.customers, inst, MODE_FEASIBILITY))
        if res.status != "feasible":
            continue
        feasible_found += 1
        if not tree_feasible(inst.customers, inst):
            _verdict("3 tree-necessity", False,
                     f"router-feasible cluster violates tree-feasibility "
                     f"(attempt {attempts})")

    # non-sufficiency witness: singleton windows (tree-trivial) whose
    # inter-window travel exceeds the slack between windows
    wins = windows((0, 100), (100, 200), (200, 300))
    cs = [cust(1, 10, 0, window=1, service=10),
          cust(2, 400, 0, window=2, service=10),
          cust(3, 10, 10, window=3, service=10)]
    witness = make_instance(cs, wins, capacity=100.0)
    is_tree = tree_feasible(witness.customers, witness)
    routed = solve(RoutingRequest(witness.customers, witness, MODE_FEASIBILITY))
    _verdict("3 tree-necessity", is_tree and routed.status == "infeasible",
             f"500/500 feasible clusters tree-feasible; witness is "
             f"tree-feasible yet {routed.status}")


# -- criteria 4 + 5: end-to-end feasibility and improvement -------------------

SIXTY = [(n, c, v, s)
         for n in (250, 500)
         for c in (200.0, 400.0)
         for v in ("a", "b", "c")
         for s in range(5)]


@pytest.fixture(scope="module")
def sixty_runs():
    specs_off = [RunSpec(n=n, capacity=c, seed=s, variant=v)
                 for (n, c, v, s) in SIXTY]
    specs_on = [RunSpec(n=n, capacity=c, seed=s, variant=v, improve=True)
                for (n, c, v, s) in SIXTY]
    off = run_batch(specs_off, jobs=JOBS)
    on = run_batch(specs_on, jobs=JOBS)
    return list(zip(SIXTY, off, on))


def test_criterion_4_end_to_end_feasibility(sixty_runs):
    failures = [(cfg, rep.diagnostics) for cfg, rep, _ in sixty_runs
                if rep.status != "ok" or rep.validation != "ok"]
    _verdict("4 end-to-end", not failures,
             f"{len(sixty_runs) - len(failures)}/{len(sixty_runs)} runs "
             f"validate clean" + (f"; failures: {failures[:3]}" if failures else ""))


def test_criterion_5_improvement_monotonicity(sixty_runs):
    for (n, c, v, s), off, on in sixty_runs:
        cfg = f"n={n} C={c:g} {v} seed={s}"
        if on.status != "ok":
            _verdict("5 improvement", False, f"{cfg}: improved run failed")
        if not (on.objective <= off.objective):
            _verdict("5 improvement", False,
                     f"{cfg}: improved {on.objective} > initial {off.objective}")
        seq = [tuple(off.objective)] + [tuple(o) for o in on.improve_trace]
        if not all(b < a for a, b in zip(seq, seq[1:])):
            _verdict("5 improvement", False,
                     f"{cfg}: accepted move did not strictly improve")
        if seq[-1] != tuple(on.objective):
            _verdict("5 improvement", False,
                     f"{cfg}: trace end {seq[-1]} != final {on.objective}")
        if on.improve_moves > n * n:
            _verdict("5 improvement", False,
                     f"{cfg}: {on.improve_moves} moves exceed bound {n * n}")
    total_moves = sum(on.improve_moves for _, _, on in sixty_runs)
    _verdict("5 improvement", True,
             f"60/60 improved runs monotone, {total_moves} accepted moves "
             f"all strictly decreasing, bound respected")


# -- criterion 6: Table-1 trend directions at desk scale ----------------------

TREND_SEEDS = range(20)


@pytest.fixture(scope="module")
def trend_runs():
    base = [RunSpec(n=250, capacity=c, seed=s, variant=v)
            for (v, c) in (("a", 200.0), ("b", 200.0), ("c", 200.0),
                           ("a", 400.0), ("b", 400.0))
            for s in TREND_SEEDS]
    improved = [RunSpec(n=250, capacity=200.0, seed=s, variant=v, improve=True)
                for v in ("a", "c") for s in TREND_SEEDS]
    reports = run_batch(base + improved, jobs=JOBS)
    cells = {}
    for rep in reports:
        assert rep.status == "ok", (rep.instance_id, rep.diagnostics)
        cells.setdefault((rep.variant, rep.capacity, rep.improve),
                         []).append(rep.objective)
    return cells


def _mean(values):
    return sum(values) / len(values)


def test_criterion_6_trend_directions(trend_runs):
    l1 = {k: _mean([o[0] for o in v]) for k, v in trend_runs.items()}
    l2 = {k: _mean([o[1] for o in v]) for k, v in trend_runs.items()}

    a400, b400 = l1[("a", 400.0, False)], l1[("b", 400.0, False)]
    ok_a = b400 <= a400
    a200_l2, b200_l2 = l2[("a", 200.0, False)], l2[("b", 200.0, False)]
    ok_b = b200_l2 < a200_l2
    a200_l1, b200_l1 = l1[("a", 200.0, False)], l1[("b", 200.0, False)]
    ok_c = a200_l1 <= b200_l1
    drops = {}
    for v in ("a", "c"):
        before = l2[(v, 200.0, False)]
        after = l2[(v, 200.0, True)]
        drops[v] = (before - after) / before
    ok_d = all(d >= 0.02 for d in drops.values())

    detail = (f"(a) C400 l1 B {b400:.2f} <= A {a400:.2f}: {ok_a}; "
              f"(b) C200 l2 B {b200_l2 / 3600:.1f}h < A {a200_l2 / 3600:.1f}h: {ok_b}; "
              f"(c) C200 l1 A {a200_l1:.2f} <= B {b200_l1:.2f}: {ok_c}; "
              f"(d) improve l2 drop a={drops['a']:.1%} c={drops['c']:.1%}: {ok_d}")
    _verdict("6 trends", ok_a and ok_b and ok_c and ok_d, detail)


# -- criterion 7: performance sanity ------------------------------------------

def test_criterion_7_performance_sanity():
    inst = generate(GenConfig(n=250, capacity=200.0, seed=0))
    t0 = time.perf_counter()
    _, rep = run_pipeline(inst, "a", "ccw", False)
    small = time.perf_counter() - t0
    assert rep.status == "ok"

    inst_big = generate(GenConfig(n=2000, capacity=200.0, seed=0))
    t0 = time.perf_counter()
    _, rep_big = run_pipeline(inst_big, "a", "ccw", False)
    big = time.perf_counter() - t0
    assert rep_big.status == "ok"
    _verdict("7 performance", small <= 10.0 and big <= 600.0,
             f"n=250 in {small:.2f}s (<=10s), n=2000 in {big:.1f}s (<=600s), "
             f"n=2000 l1={rep_big.objective[0]}")


# -- criterion 8: generator conformance ---------------------------------------

def test_criterion_8_generator_conformance():
    for n in (250, 501):
        config = GenConfig(n=n, capacity=200.0, seed=13)
        inst = generate(config)
        ok = (len(inst.customers) == n
              and all(0 <= c.x <= 20000 and 0 <= c.y <= 20000
                      for c in inst.customers)
              and len(inst.windows) == 10
              and all((w.start, w.end) == (j * 3600, (j + 1) * 3600)
                      for j, w in enumerate(inst.windows))
              and all(c.service == 300 for c in inst.customers)
              and all(1.0 <= c.weight <= 10.0 for c in inst.customers)
              and inst.meta["uniform_count"] == uniform_location_count(n)
              and inst.meta["uniform_count"] == math.ceil(0.2 * n))
        if not ok:
            _verdict("8 generator", False, f"structural check failed at n={n}")
        again = generate(GenConfig(n=n, capacity=200.0, seed=13))
        if (canonical_dumps(instance_to_dict(inst))
                != canonical_dumps(instance_to_dict(again))):
            _verdict("8 generator", False, f"seed 13 regeneration differs at n={n}")
    _verdict("8 generator", True,
             "n=250 and n=501 conform; regeneration byte-identical")
