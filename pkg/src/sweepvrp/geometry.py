"""Polar representation of customers around the depot.

All sweep clustering works on angles normalized to [0, 2*pi) relative to
a chosen zero direction.  Clockwise sweeps are handled by mirroring the
angle, so downstream code always sees increasing angles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .model import Customer, DomainError, Instance, Point

TWO_PI = 2.0 * math.pi

CCW = "ccw"
CW = "cw"


def _normalize(angle: float) -> float:
    """Wrap into [0, 2*pi); guards against float mod landing on 2*pi."""
    a = angle % TWO_PI
    if a >= TWO_PI or a < 0.0:
        a = 0.0
    return a


def raw_angle(location: Point, depot: Point) -> float:
    """Counterclockwise angle of a point around the depot, in [0, 2*pi).

    A point exactly at the depot gets angle 0 by convention.
    """
    dx, dy = location[0] - depot[0], location[1] - depot[1]
    if dx == 0.0 and dy == 0.0:
        return 0.0
    return _normalize(math.atan2(dy, dx))


@dataclass
class PolarView:
    """Normalized angles of all customers for one sweep direction.

    `order` lists customer ids sorted by (angle, distance to depot, id),
    which is the total order every sweep walks.
    """

    zero_angle: float
    direction: str  # CCW or CW
    angles: dict[int, float]
    order: tuple[int, ...]

    @cached_property
    def rank(self) -> dict[int, int]:
        return {cid: k for k, cid in enumerate(self.order)}


def angle_of(customer: Customer, depot: Point, view: PolarView) -> float:
    """Normalized angle of one customer under the view's zero angle and
    direction (clockwise mirrors the offset before normalization)."""
    raw = raw_angle(customer.location, depot)
    if customer.location == tuple(depot):
        return 0.0
    if view.direction == CW:
        return _normalize(view.zero_angle - raw)
    return _normalize(raw - view.zero_angle)


def choose_zero_angle(customers: Sequence[Customer], depot: Point) -> float:
    """Midpoint of the largest circular gap between consecutive customer
    angles.  Deterministic: among equal gaps the first in sorted order
    wins."""
    if not customers:
        raise DomainError("cannot choose a zero angle without customers")
    raws = sorted(raw_angle(c.location, depot) for c in customers)
    best_gap = -1.0
    best_mid = 0.0
    for i, a in enumerate(raws):
        nxt = raws[i + 1] if i + 1 < len(raws) else raws[0] + TWO_PI
        gap = nxt - a
        if gap > best_gap:
            best_gap = gap
            best_mid = _normalize(a + gap / 2.0)
    return best_mid


def polar_view(instance: Instance, direction: str = CCW) -> PolarView:
    if direction not in (CCW, CW):
        raise DomainError(f"unknown sweep direction {direction!r}")
    if not instance.customers:
        return PolarView(0.0, direction, {}, ())
    zero = choose_zero_angle(instance.customers, instance.depot)
    view = PolarView(zero, direction, {}, ())
    angles = {c.id: angle_of(c, instance.depot, view) for c in instance.customers}
    order = tuple(sorted(
        angles,
        key=lambda cid: (
            angles[cid],
            math.dist(instance.by_id[cid].location, instance.depot),
            cid,
        ),
    ))
    view.angles = angles
    view.order = order
    return view


def sector(customers: Iterable[Customer], theta: float, theta2: float,
           view: PolarView) -> list[Customer]:
    """Customers whose normalized angle lies in the half-open [theta, theta2).

    Sectors never wrap: theta <= theta2 is required.  theta2 = 2*pi covers
    everything up to the full circle.
    """
    if not (0.0 <= theta <= TWO_PI and 0.0 <= theta2 <= TWO_PI):
        raise DomainError(f"sector bounds must lie in [0, 2*pi], got [{theta}, {theta2}]")
    if theta > theta2:
        raise DomainError(f"sector bounds out of order: {theta} > {theta2}")
    rank = view.rank
    picked = [c for c in customers if theta <= view.angles[c.id] < theta2]
    picked.sort(key=lambda c: rank[c.id])
    return picked


def sector_w(customers: Iterable[Customer], window_id: int, theta: float,
             theta2: float, view: PolarView) -> list[Customer]:
    """Window-restricted sector: members of the window inside [theta, theta2)."""
    return sector([c for c in customers if c.window == window_id], theta, theta2, view)
