"""Sweep-clustering solver toolkit for the capacitated VRP with
structured (non-overlapping) time windows.

Pipeline: generate or load an instance, cluster customers with one of
the sweep variants, optionally improve the clustering by boundary-angle
moves, then route each cluster exactly under the lexicographic
(vehicles, duration, travel) objective.
"""

from .model import (Customer, Instance, Objective, Schedule, TimeWindow,
                    Tour, lex_compare, schedule_objective, tour_objectives,
                    travel_time, validate_schedule)
from .geometry import CCW, CW, PolarView, polar_view
from .feasibility import (ClusterChecker, FeasibilityVerdict,
                          capacity_feasible, check_cluster,
                          min_arborescence_length, tree_feasible)
from .router import (RouterSession, RoutingRequest, RoutingResult,
                     min_duration_for_sequence, solve)
from .sweep import (Clustering, best_of_directions, route_clustering,
                    run_sweep, sweep_variant_a, sweep_variant_b,
                    sweep_variant_c, traditional_sweep)
from .improve import improve
from .gen import GenConfig, generate
from .bench import RunReport, RunSpec, aggregate, io_roundtrip, run_pipeline

__version__ = "0.1.0"

__all__ = [
    "CCW", "CW", "ClusterChecker", "Clustering", "Customer",
    "FeasibilityVerdict", "GenConfig", "Instance", "Objective", "PolarView",
    "RouterSession", "RoutingRequest", "RoutingResult", "RunReport",
    "RunSpec", "Schedule", "TimeWindow", "Tour", "aggregate",
    "best_of_directions", "capacity_feasible", "check_cluster", "generate",
    "improve", "io_roundtrip", "lex_compare", "min_arborescence_length",
    "min_duration_for_sequence", "polar_view", "route_clustering",
    "run_pipeline", "run_sweep", "schedule_objective", "solve",
    "sweep_variant_a", "sweep_variant_b", "sweep_variant_c",
    "tour_objectives", "traditional_sweep", "travel_time", "tree_feasible",
    "validate_schedule",
]
