"""File-backed matplotlib figures for the report paths.

Every function renders to a path and returns it; nothing is shown
interactively, so the module forces the Agg backend up front.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def save_density_trace(estimate, path: str) -> str:
    """Density readings along the radius schedule, final value marked."""
    radii = [r for r, _ in estimate.trace] or [estimate.radius_used]
    vals = [v for _, v in estimate.trace] or [estimate.value]
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.plot(radii, vals, marker="o", lw=1.2)
    ax.axhline(estimate.value, color="gray", lw=0.8, ls="--")
    ax.set_xlabel("radius")
    ax.set_ylabel("points per unit volume")
    ax.set_title("density trace")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def save_injectivity_trace(trace, path: str) -> str:
    """Surviving fraction per composition depth, one line per radius."""
    fig, ax = plt.subplots(figsize=(5, 3.2))
    depths = np.arange(1, len(trace.taus) + 1)
    for j, R in enumerate(trace.radii):
        ax.plot(depths, [trace.taus[i][j] for i in range(len(trace.taus))],
                marker="o", lw=1.2, label=f"R={R:g}")
    ax.set_xlabel("composition depth")
    ax.set_ylabel("surviving fraction")
    ax.set_ylim(0, 1.05)
    ax.set_title("rate of injectivity")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def save_frequency_stem(table, path: str, axis: int = 0) -> str:
    """Frequencies of one-dimensional difference vectors as a stem plot.

    For planar tables only differences on the chosen axis are shown.
    """
    xs, ys = [], []
    for key, rho in table.sorted_entries():
        if table.dimension == 1:
            xs.append(float(key[0]))
            ys.append(float(rho))
        else:
            off = [float(c) for i, c in enumerate(key) if i != axis]
            if all(abs(c) < 1e-12 for c in off):
                xs.append(float(key[axis]))
                ys.append(float(rho))
    fig, ax = plt.subplots(figsize=(6, 3.2))
    ax.stem(xs, ys, basefmt=" ")
    ax.set_xlabel("difference")
    ax.set_ylabel("frequency")
    ax.set_ylim(0, 1.05)
    ax.set_title("frequency of differences")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def save_loss_curve(lost, path: str) -> str:
    """Lost-pixel fraction per step of a rounded-map pipeline."""
    fig, ax = plt.subplots(figsize=(5, 3.2))
    steps = np.arange(1, len(lost) + 1)
    ax.plot(steps, lost, marker="o", lw=1.2)
    ax.set_xlabel("step")
    ax.set_ylabel("lost-pixel fraction")
    ax.set_ylim(0, 1.0)
    ax.set_title("pixel loss per step")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
