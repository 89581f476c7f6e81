"""Canonical JSON serialization of instances, schedules and reports.

Canonical form means sorted keys and compact separators, so equal values
serialize to identical bytes and artifacts diff cleanly.  Parse errors
carry the file location (line, column, character offset).
"""

from __future__ import annotations

import json
from pathlib import Path

from .model import Customer, Instance, Schedule, SolverError, TimeWindow, Tour


class ParseError(SolverError):
    pass


def canonical_dumps(value) -> str:
    return json.dumps(value, sort_keys=True, separators=(",", ":")) + "\n"


def load_json(path):
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(
            f"{path}: {e.msg} at line {e.lineno} column {e.colno} (char {e.pos})"
        ) from None


def _req(mapping, key, where):
    try:
        return mapping[key]
    except (KeyError, TypeError, IndexError):
        raise ParseError(f"missing or malformed {key!r} in {where}") from None


# -- instances ---------------------------------------------------------------

def instance_to_dict(instance: Instance) -> dict:
    d = {
        "capacity": instance.capacity,
        "speed_kmh": instance.speed_kmh,
        "depot": [instance.depot[0], instance.depot[1]],
        "windows": [{"id": w.id, "start_s": w.start, "end_s": w.end}
                    for w in instance.windows],
        "customers": [{"id": c.id, "x": c.x, "y": c.y, "window": c.window,
                       "weight": c.weight, "service_s": c.service}
                      for c in instance.customers],
    }
    if instance.meta is not None:
        d["meta"] = instance.meta
    return d


def instance_from_dict(d: dict) -> Instance:
    windows = tuple(
        TimeWindow(int(_req(w, "id", "window")),
                   int(_req(w, "start_s", "window")),
                   int(_req(w, "end_s", "window")))
        for w in _req(d, "windows", "instance")
    )
    customers = tuple(
        Customer(int(_req(c, "id", "customer")),
                 float(_req(c, "x", "customer")),
                 float(_req(c, "y", "customer")),
                 int(_req(c, "window", "customer")),
                 float(_req(c, "weight", "customer")),
                 int(_req(c, "service_s", "customer")))
        for c in _req(d, "customers", "instance")
    )
    depot = _req(d, "depot", "instance")
    return Instance(
        customers,
        (float(_req(depot, 0, "depot")), float(_req(depot, 1, "depot"))),
        windows,
        float(_req(d, "capacity", "instance")),
        float(_req(d, "speed_kmh", "instance")),
        meta=d.get("meta"),
    )


def save_instance(instance: Instance, path):
    Path(path).write_text(canonical_dumps(instance_to_dict(instance)))


def load_instance(path) -> Instance:
    return instance_from_dict(load_json(path))


# -- schedules ---------------------------------------------------------------

def schedule_to_dict(schedule: Schedule) -> dict:
    return {"tours": [{"customers": list(t.customers),
                       "arrivals_s": list(t.arrivals)}
                      for t in schedule.tours]}


def schedule_from_dict(d: dict) -> Schedule:
    tours = [Tour(tuple(int(c) for c in _req(t, "customers", "tour")),
                  tuple(int(a) for a in _req(t, "arrivals_s", "tour")))
             for t in _req(d, "tours", "schedule")]
    return Schedule(tours)


def save_schedule(schedule: Schedule, path):
    Path(path).write_text(canonical_dumps(schedule_to_dict(schedule)))


def load_schedule(path) -> Schedule:
    return schedule_from_dict(load_json(path))


# -- single-cluster debug files ------------------------------------------------

def load_cluster_ids(path) -> list[int]:
    return [int(c) for c in _req(load_json(path), "customers", "cluster")]


def save_report(report: dict, path):
    Path(path).write_text(canonical_dumps(report))
