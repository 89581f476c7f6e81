"""Figure rendering for the report path.

Figures are written next to the delimited/JSON outputs: a customer map
with routed tours for single solves, and Table-style bar charts for
batch aggregates.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .model import Instance, Schedule


def plot_schedule(instance: Instance, schedule: Schedule, path,
                  title: str = "") -> None:
    fig, ax = plt.subplots(figsize=(8, 8))
    cmap = plt.get_cmap("tab20")
    for t, tour in enumerate(schedule.tours):
        color = cmap(t % 20)
        xs = [instance.depot[0]]
        ys = [instance.depot[1]]
        for cid in tour.customers:
            c = instance.by_id[cid]
            xs.append(c.x)
            ys.append(c.y)
        xs.append(instance.depot[0])
        ys.append(instance.depot[1])
        ax.plot(xs, ys, "-", color=color, linewidth=0.8, alpha=0.7, zorder=1)
        ax.scatter(xs[1:-1], ys[1:-1], s=14, color=color, zorder=2)
    ax.scatter([instance.depot[0]], [instance.depot[1]], marker="*", s=220,
               color="black", zorder=3, label="depot")
    ax.set_aspect("equal")
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    ax.set_title(title or f"{len(schedule.tours)} tours, "
                          f"{len(instance.customers)} customers")
    ax.legend(loc="upper right")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_instance(instance: Instance, path, title: str = "") -> None:
    fig, ax = plt.subplots(figsize=(8, 8))
    cmap = plt.get_cmap("viridis")
    q = max(len(instance.windows), 1)
    for c in instance.customers:
        pos = instance.window_order[c.window]
        ax.scatter([c.x], [c.y], s=12, color=cmap(pos / q), zorder=2)
    ax.scatter([instance.depot[0]], [instance.depot[1]], marker="*", s=220,
               color="black", zorder=3, label="depot")
    ax.set_aspect("equal")
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    ax.set_title(title or f"{len(instance.customers)} customers "
                          f"(hue = time window)")
    ax.legend(loc="upper right")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_aggregate(rows, path) -> None:
    """Grouped bars of mean vehicle count and mean schedule duration per
    sweep variant, with and without improvement."""
    fig, axes = plt.subplots(1, 3, figsize=(13, 4.2))
    variants = sorted({r["variant"] for r in rows})
    metrics = [("mean_lambda1", "vehicles"),
               ("mean_lambda2_h", "schedule duration [h]"),
               ("mean_lambda3_h", "travel time [h]")]
    capacities = sorted({r["capacity"] for r in rows})
    width = 0.8 / max(1, 2 * len(capacities))
    for ax, (key, label) in zip(axes, metrics):
        tick = 0
        ticks, ticklabels = [], []
        for v, variant in enumerate(variants):
            offset = 0
            for capacity in capacities:
                for improved in (False, True):
                    cell = [r for r in rows if r["variant"] == variant
                            and r["capacity"] == capacity
                            and r["improve"] == improved]
                    if not cell:
                        continue
                    x = v + (offset - 0.5) * width
                    name = f"C={capacity:g}" + ("+imp" if improved else "")
                    ax.bar([x], [cell[0][key]], width=width * 0.9,
                           label=name if v == 0 else None)
                    offset += 1
            ticks.append(v)
            ticklabels.append(variant)
        ax.set_xticks(ticks)
        ax.set_xticklabels(ticklabels)
        ax.set_xlabel("sweep variant")
        ax.set_ylabel(label)
    axes[0].legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
