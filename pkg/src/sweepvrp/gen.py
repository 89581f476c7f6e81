"""Seeded benchmark instance generation.

Instances resemble urban settlement structure: one fifth of the
customers is spread uniformly over a square grid, the rest is drawn from
a handful of randomly placed, randomly shaped Gaussian clusters.  All
randomness flows through a single PCG64 stream, so a seed pins the
instance down exactly; the full generator configuration is embedded in
the instance for provenance.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .model import (ConfigurationError, Customer, Instance, TimeWindow,
                    quantize_weight)

CLUSTER_COUNT_RANGE = (3, 8)       # inclusive
CLUSTER_SIGMA_RANGE = (500.0, 2000.0)  # meters, per axis


@dataclass
class GenConfig:
    n: int
    capacity: float
    seed: int
    grid_m: float = 20000.0
    speed_kmh: float = 20.0
    window_count: int = 10
    window_length_s: int = 3600
    service_s: int = 300
    weight_mean: float = 5.0
    weight_sd: float = 1.5
    weight_min: float = 1.0
    weight_max: float = 10.0
    depot: str = "center"  # "center" or "corner"

    def validate(self):
        if self.n < 1:
            raise ConfigurationError("n must be at least 1")
        if self.capacity <= 0:
            raise ConfigurationError("capacity must be positive")
        if self.grid_m <= 0 or self.speed_kmh <= 0:
            raise ConfigurationError("grid size and speed must be positive")
        if self.window_count < 1 or self.window_length_s <= 0:
            raise ConfigurationError("need at least one window of positive length")
        if self.service_s <= 0:
            raise ConfigurationError("service time must be positive")
        if not (0 < self.weight_min <= self.weight_mean <= self.weight_max):
            raise ConfigurationError("weight bounds must satisfy 0 < min <= mean <= max")
        if self.weight_max > self.capacity:
            raise ConfigurationError("maximum order weight exceeds the vehicle capacity")
        if self.depot not in ("center", "corner"):
            raise ConfigurationError(f"unknown depot placement {self.depot!r}")


def uniform_location_count(n: int) -> int:
    """Number of uniformly placed customers: ceil(0.2 * n), exactly."""
    return -(-n // 5)


def _sample_locations(rng: np.random.Generator, config: GenConfig):
    """Uniform locations first, then Gaussian-cluster locations.

    Cluster centers, per-axis sigmas and rotations are themselves random;
    off-grid samples are redrawn.
    """
    grid = config.grid_m
    n_uniform = uniform_location_count(config.n)
    n_clustered = config.n - n_uniform

    k = int(rng.integers(CLUSTER_COUNT_RANGE[0], CLUSTER_COUNT_RANGE[1] + 1))
    centers = rng.uniform(0.0, grid, size=(k, 2))
    sigmas = rng.uniform(*CLUSTER_SIGMA_RANGE, size=(k, 2))
    rotations = rng.uniform(0.0, 2.0 * math.pi, size=k)

    uniform_pts = [tuple(rng.uniform(0.0, grid, size=2)) for _ in range(n_uniform)]

    clustered_pts = []
    for _ in range(n_clustered):
        c = int(rng.integers(0, k))
        cos_r, sin_r = math.cos(rotations[c]), math.sin(rotations[c])
        while True:
            ox, oy = rng.standard_normal(2) * sigmas[c]
            x = centers[c][0] + cos_r * ox - sin_r * oy
            y = centers[c][1] + sin_r * ox + cos_r * oy
            if 0.0 <= x <= grid and 0.0 <= y <= grid:
                clustered_pts.append((x, y))
                break
    return uniform_pts, clustered_pts


def _sample_weight(rng: np.random.Generator, config: GenConfig) -> float:
    while True:
        w = rng.normal(config.weight_mean, config.weight_sd)
        if config.weight_min <= w <= config.weight_max:
            return quantize_weight(w)


def generate(config: GenConfig) -> Instance:
    """Deterministic instance for the given configuration and seed."""
    config.validate()
    rng = np.random.Generator(np.random.PCG64(config.seed))

    uniform_pts, clustered_pts = _sample_locations(rng, config)
    points = uniform_pts + clustered_pts
    window_ids = rng.integers(1, config.window_count + 1, size=config.n)
    weights = [_sample_weight(rng, config) for _ in range(config.n)]

    windows = tuple(
        TimeWindow(j + 1, j * config.window_length_s, (j + 1) * config.window_length_s)
        for j in range(config.window_count)
    )
    customers = tuple(
        Customer(i + 1, points[i][0], points[i][1], int(window_ids[i]),
                 weights[i], config.service_s)
        for i in range(config.n)
    )
    if config.depot == "center":
        depot = (config.grid_m / 2.0, config.grid_m / 2.0)
    else:
        depot = (0.0, 0.0)
    meta = {
        "generator": asdict(config),
        "uniform_count": len(uniform_pts),
    }
    return Instance(customers, depot, windows, float(config.capacity),
                    float(config.speed_kmh), meta=meta)
