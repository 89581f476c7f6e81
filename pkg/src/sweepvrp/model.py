"""Domain model: instances, tours, schedules, objectives and their validation.

Times are integer seconds throughout.  Order weights carry a fixed
3-decimal precision; capacity arithmetic is done on integer milli-units
so feasibility checks are exact on every platform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional

Point = tuple[float, float]

KMH_TO_MPS = 1000.0 / 3600.0

LESS, EQUAL, GREATER = -1, 0, 1


class SolverError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(SolverError):
    """Invalid configuration value (speeds, generator parameters, ...)."""


class DomainError(SolverError):
    """Operation applied to a value outside its domain (empty tour, ...)."""


class InfeasibleInstanceError(SolverError):
    """A single customer cannot be served on its own; no schedule exists."""

    def __init__(self, customer_id: int, reason: str):
        super().__init__(f"customer {customer_id} is unschedulable: {reason}")
        self.customer_id = customer_id
        self.reason = reason


class RouterBudgetError(SolverError):
    """The routing subsolver ran out of wall-clock budget; feasibility of
    the cluster is unknown (deliberately never mapped to 'infeasible')."""


def weight_milli(weight: float) -> int:
    """Weight in integer milli-units (the exact representation)."""
    return round(weight * 1000)


def quantize_weight(weight: float) -> float:
    """Snap a weight to the canonical 3-decimal grid."""
    return weight_milli(weight) / 1000.0


def travel_time(p: Point, q: Point, speed: float) -> int:
    """Travel seconds between two points: Euclidean distance over speed
    (m/s), rounded to integer seconds.  Symmetric by construction."""
    if speed <= 0:
        raise ConfigurationError(f"travel speed must be positive, got {speed}")
    return round(math.dist(p, q) / speed)


@dataclass(frozen=True)
class TimeWindow:
    id: int
    start: int  # seconds
    end: int    # seconds

    def __post_init__(self):
        if self.start >= self.end:
            raise DomainError(f"window {self.id}: start {self.start} >= end {self.end}")

    @property
    def length(self) -> int:
        return self.end - self.start


@dataclass(frozen=True)
class Customer:
    id: int
    x: float
    y: float
    window: int      # TimeWindow id
    weight: float    # order weight, 3-decimal precision
    service: int     # service seconds

    def __post_init__(self):
        if self.weight <= 0:
            raise DomainError(f"customer {self.id}: weight must be positive")
        if self.service <= 0:
            raise DomainError(f"customer {self.id}: service time must be positive")

    @property
    def location(self) -> Point:
        return (self.x, self.y)


@dataclass
class Instance:
    """A cVRPsTW instance.

    Windows must be sorted and pairwise non-overlapping.  Travel times
    derive from coordinates and `speed_kmh` unless `travel_provider`
    (an integer-seconds function of two points) is plugged in.
    """

    customers: tuple[Customer, ...]
    depot: Point
    windows: tuple[TimeWindow, ...]
    capacity: float
    speed_kmh: float
    meta: Optional[dict] = field(default=None, compare=False)
    travel_provider: Optional[Callable[[Point, Point], int]] = field(
        default=None, compare=False, repr=False
    )

    def __post_init__(self):
        self.customers = tuple(self.customers)
        self.windows = tuple(self.windows)
        if self.capacity <= 0:
            raise ConfigurationError("capacity must be positive")
        if self.speed_kmh <= 0:
            raise ConfigurationError("speed must be positive")
        for earlier, later in zip(self.windows, self.windows[1:]):
            if later.start < earlier.end:
                raise DomainError(
                    f"windows {earlier.id} and {later.id} overlap "
                    f"({earlier.end} > {later.start})"
                )
        window_ids = {w.id for w in self.windows}
        if len(window_ids) != len(self.windows):
            raise DomainError("duplicate window ids")
        seen = set()
        for c in self.customers:
            if c.id in seen:
                raise DomainError(f"duplicate customer id {c.id}")
            seen.add(c.id)
            if c.window not in window_ids:
                raise DomainError(f"customer {c.id} references unknown window {c.window}")
            if weight_milli(c.weight) > weight_milli(self.capacity):
                raise DomainError(
                    f"customer {c.id}: weight {c.weight} exceeds capacity {self.capacity}"
                )

    @cached_property
    def speed(self) -> float:
        """Travel speed in meters per second."""
        return self.speed_kmh * KMH_TO_MPS

    @cached_property
    def by_id(self) -> dict[int, Customer]:
        return {c.id: c for c in self.customers}

    @cached_property
    def window_by_id(self) -> dict[int, TimeWindow]:
        return {w.id: w for w in self.windows}

    @cached_property
    def window_order(self) -> dict[int, int]:
        """Window id -> position in the sorted window sequence."""
        return {w.id: i for i, w in enumerate(self.windows)}

    def travel(self, p: Point, q: Point) -> int:
        if self.travel_provider is not None:
            return self.travel_provider(p, q)
        return travel_time(p, q, self.speed)

    def travel_ids(self, a: Optional[int], b: Optional[int]) -> int:
        """Travel seconds between customer ids; None stands for the depot."""
        p = self.depot if a is None else self.by_id[a].location
        q = self.depot if b is None else self.by_id[b].location
        return self.travel(p, q)


@dataclass
class Tour:
    """One vehicle's visit sequence with scheduled arrival seconds."""

    customers: tuple[int, ...]
    arrivals: tuple[int, ...]

    def __post_init__(self):
        self.customers = tuple(self.customers)
        self.arrivals = tuple(self.arrivals)


@dataclass
class Schedule:
    tours: list[Tour]


class Objective(tuple):
    """Lexicographic objective (vehicles, duration_s, travel_s)."""

    __slots__ = ()

    def __new__(cls, vehicles: int, duration_s: int, travel_s: int):
        return super().__new__(cls, (vehicles, duration_s, travel_s))

    @property
    def vehicles(self) -> int:
        return self[0]

    @property
    def duration_s(self) -> int:
        return self[1]

    @property
    def travel_s(self) -> int:
        return self[2]

    def __repr__(self):
        return f"Objective(vehicles={self[0]}, duration_s={self[1]}, travel_s={self[2]})"


def lex_compare(a, b) -> int:
    """Compare two objective triples lexicographically.

    Returns LESS (-1), EQUAL (0) or GREATER (1).
    """
    ta, tb = tuple(a), tuple(b)
    if ta < tb:
        return LESS
    if ta > tb:
        return GREATER
    return EQUAL


def tour_objectives(tour: Tour, instance: Instance) -> tuple[int, int]:
    """Per-tour (duration, travel) seconds.

    duration = t(d,a1) + (arrival_k - arrival_1) + service(a_k) + t(a_k,d)
    travel   = t(d,a1) + sum of consecutive legs + t(a_k,d)
    """
    if not tour.customers:
        raise DomainError("tour objectives are undefined for an empty tour")
    first, last = tour.customers[0], tour.customers[-1]
    t_out = instance.travel_ids(None, first)
    t_back = instance.travel_ids(last, None)
    duration = t_out + (tour.arrivals[-1] - tour.arrivals[0]) + instance.by_id[last].service + t_back
    travel = t_out + t_back
    for a, b in zip(tour.customers, tour.customers[1:]):
        travel += instance.travel_ids(a, b)
    return duration, travel


def schedule_objective(schedule: Schedule, instance: Instance) -> Objective:
    """Objective of a (valid) schedule: tour count plus summed components."""
    duration = 0
    travel = 0
    for tour in schedule.tours:
        d, t = tour_objectives(tour, instance)
        duration += d
        travel += t
    return Objective(len(schedule.tours), duration, travel)


@dataclass(frozen=True)
class Violation:
    kind: str                    # capacity | window | chaining | duplicate | missing | malformed
    tour: Optional[int]          # tour index within the schedule
    customer: Optional[int]      # customer id
    detail: str

    def __str__(self):
        where = [] if self.tour is None else [f"tour {self.tour}"]
        if self.customer is not None:
            where.append(f"customer {self.customer}")
        prefix = ", ".join(where)
        return f"{self.kind} ({prefix}): {self.detail}" if prefix else f"{self.kind}: {self.detail}"


def validate_schedule(schedule: Schedule, instance: Instance) -> list[Violation]:
    """Check a schedule against every feasibility condition.

    Returns the (possibly empty) list of violations instead of raising:
    capacity excess, window misses, chaining gaps, malformed tours, and
    partition defects (duplicated or missing customers).
    """
    violations = []
    seen: dict[int, int] = {}
    cap_milli = weight_milli(instance.capacity)

    for ti, tour in enumerate(schedule.tours):
        if len(tour.customers) != len(tour.arrivals):
            violations.append(Violation(
                "malformed", ti, None,
                f"{len(tour.customers)} customers but {len(tour.arrivals)} arrivals"))
            continue
        if not tour.customers:
            violations.append(Violation("malformed", ti, None, "empty tour"))
            continue

        load_milli = 0
        for ci, cid in enumerate(tour.customers):
            if cid not in instance.by_id:
                violations.append(Violation("malformed", ti, cid, "unknown customer id"))
                continue
            if cid in seen:
                violations.append(Violation(
                    "duplicate", ti, cid, f"already scheduled in tour {seen[cid]}"))
            else:
                seen[cid] = ti
            customer = instance.by_id[cid]
            load_milli += weight_milli(customer.weight)
            window = instance.window_by_id[customer.window]
            arrival = tour.arrivals[ci]
            if not (window.start <= arrival <= window.end):
                violations.append(Violation(
                    "window", ti, cid,
                    f"arrival {arrival} outside window [{window.start}, {window.end}]"))

        if load_milli > cap_milli:
            violations.append(Violation(
                "capacity", ti, None,
                f"load {load_milli / 1000.0} exceeds capacity {instance.capacity}"))

        for ci in range(len(tour.customers) - 1):
            a, b = tour.customers[ci], tour.customers[ci + 1]
            if a not in instance.by_id or b not in instance.by_id:
                continue
            gap = tour.arrivals[ci + 1] - tour.arrivals[ci]
            need = instance.by_id[a].service + instance.travel_ids(a, b)
            if gap < need:
                violations.append(Violation(
                    "chaining", ti, b,
                    f"arrival gap {gap} < service+travel {need} after customer {a}"))

    for c in instance.customers:
        if c.id not in seen:
            violations.append(Violation("missing", None, c.id, "customer not scheduled"))

    return violations
