"""Deterministic SVG plots for trajectories.

All figures go through the Agg backend with a fixed svg hash salt and no
embedded date metadata, so identical trajectories produce bit-identical
files.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg", force=True)

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .energy import COMPONENT_NAMES  # noqa: E402

plt.rcParams["svg.hashsalt"] = "wavestab"

__all__ = [
    "plot_energy_components",
    "plot_spacetime_components",
    "plot_waterfall",
    "emit_plots",
]

_SAVE_KW = {"format": "svg", "metadata": {"Date": None}}


def _finish(fig, path):
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)
    return str(path)


def plot_energy_components(traj, path):
    """Slice components and E_total against time, log scale when possible."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ts = [r.t for r in traj.reports]
    any_positive = False
    for name in COMPONENT_NAMES:
        vals = [getattr(r, name) for r in traj.reports]
        any_positive = any_positive or any(v > 0 for v in vals)
        ax.plot(ts, vals, label=name, lw=1.0)
    totals = [r.E_total for r in traj.reports]
    ax.plot(ts, totals, label="E_total", lw=2.0, color="black")
    if any_positive:
        ax.set_yscale("log")
    ax.set_xlabel("t")
    ax.set_ylabel("slice energy")
    ax.legend(fontsize=7, ncol=2)
    ax.set_title("weighted slice energies")
    return _finish(fig, path)


def plot_spacetime_components(traj, path):
    """Running spacetime components and SE_total against time."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ts = [r.t for r in traj.reports]
    any_positive = False
    for name in COMPONENT_NAMES:
        vals = [getattr(r, "SE" + name[1:]) for r in traj.reports]
        any_positive = any_positive or any(v > 0 for v in vals)
        ax.plot(ts, vals, label="SE" + name[1:], lw=1.0)
    totals = [r.SE_total for r in traj.reports]
    ax.plot(ts, totals, label="SE_total", lw=2.0, color="black")
    if any_positive:
        ax.set_yscale("log")
    ax.set_xlabel("t")
    ax.set_ylabel("spacetime energy")
    ax.legend(fontsize=7, ncol=2)
    ax.set_title("accumulated spacetime energies")
    return _finish(fig, path)


def plot_waterfall(traj, path):
    """|u| snapshots stacked by time."""
    fig, ax = plt.subplots(figsize=(7, 5.5))
    x = traj.grid.x
    amp = max((float(np.abs(u).max()) for _, u, _ in traj.snapshots), default=0.0)
    if amp <= 0:
        amp = 1.0
    if len(traj.snapshots) > 1:
        spacing = (traj.snapshots[-1][0] - traj.snapshots[0][0]) / (
            len(traj.snapshots) - 1
        )
    else:
        spacing = 1.0
    if spacing <= 0:
        spacing = 1.0
    for t, u, _ in traj.snapshots:
        mag = np.sqrt(np.sum(u * u, axis=-1))
        ax.plot(x, t + 0.9 * spacing * mag / amp, lw=0.8, color="tab:blue")
    ax.set_xlabel("x")
    ax.set_ylabel("t (+ scaled |u|)")
    ax.set_title("perturbation magnitude")
    return _finish(fig, path)


def emit_plots(traj, outdir):
    """Write the three standard SVGs into outdir; returns their paths."""
    from pathlib import Path

    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    if traj.reports:
        written.append(
            plot_energy_components(traj, outdir / "energy_components.svg")
        )
        written.append(
            plot_spacetime_components(traj, outdir / "spacetime_energy.svg")
        )
    written.append(plot_waterfall(traj, outdir / "waterfall.svg"))
    return written
