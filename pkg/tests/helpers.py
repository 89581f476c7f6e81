"""Shared instance builders for the test suite.

Most hand-built instances use speed 3.6 km/h (= 1 m/s) so that travel
times equal Euclidean distances in meters, which keeps expected values
easy to verify by hand.
"""

from sweepvrp.model import Customer, Instance, TimeWindow

UNIT_SPEED_KMH = 3.6  # 1 m/s


def windows(*spans, start_id=1):
    return tuple(TimeWindow(start_id + i, s, e) for i, (s, e) in enumerate(spans))


def cust(cid, x, y, window=1, weight=1.0, service=300):
    return Customer(cid, float(x), float(y), window, weight, service)


def make_instance(customers, wins, capacity=1000.0, speed_kmh=UNIT_SPEED_KMH,
                  depot=(0.0, 0.0), provider=None):
    return Instance(tuple(customers), depot, tuple(wins), capacity, speed_kmh,
                    travel_provider=provider)


def pair_provider(times):
    """Symmetric travel-time provider from a {(point, point): seconds} map."""
    def f(p, q):
        if p == q:
            return 0
        if (p, q) in times:
            return times[(p, q)]
        return times[(q, p)]
    return f


def random_router_cluster(rng):
    """Small random instance for router-vs-oracle comparisons.

    Up to 8 customers over up to 3 windows; window lengths are kept short
    so the oracle's start-time enumeration stays cheap.  Sets mix feasible
    and infeasible cases.
    """
    q = rng.randint(1, 3)
    wins = []
    t = 0
    for _ in range(q):
        t += rng.randint(0, 120)
        length = rng.randint(60, 200)
        wins.append((t, t + length))
        t += length
    k = rng.randint(1, 5 + q)
    customers = [
        cust(i + 1,
             rng.uniform(-40, 40), rng.uniform(-40, 40),
             window=rng.randint(1, q),
             weight=1.0,
             service=rng.randint(10, 40))
        for i in range(k)
    ]
    return make_instance(customers, windows(*wins), capacity=1e6)
