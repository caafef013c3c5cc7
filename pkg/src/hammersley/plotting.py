"""Figures written next to the CSV reports."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .lines import LineDiagram  # noqa: E402

plt.rcParams.update({
    "figure.dpi": 110,
    "savefig.dpi": 110,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "font.size": 9,
    # fixed metadata keeps repeated runs byte-identical
    "svg.hashsalt": "hammersley",
})

_META = {"Software": None}


def _save(fig, path) -> Path:
    path = Path(path)
    fig.tight_layout()
    fig.savefig(path, metadata=_META)
    plt.close(fig)
    return path


def lln_histogram(samples, target: float, path, title: str = "") -> Path:
    fig, ax = plt.subplots(figsize=(4.5, 3))
    ax.hist(np.asarray(samples), bins=30, color="#4c72b0", alpha=0.8)
    ax.axvline(target, color="#c44e52", lw=1.5, label=f"limit {target:.4f}")
    ax.axvline(float(np.mean(samples)), color="black", lw=1, ls="--", label="mean")
    ax.set_xlabel("L / n")
    ax.set_ylabel("replicas")
    ax.set_title(title)
    ax.legend(frameon=False)
    return _save(fig, path)


def slice_means(means, expected: float, stderr: float, path, band: float = 5.0) -> Path:
    t = np.arange(len(means))
    fig, ax = plt.subplots(figsize=(4.5, 3))
    ax.fill_between(t, expected - band * stderr, expected + band * stderr, color="#dddddd", label=f"{band:g} sigma")
    ax.plot(t, means, marker=".", color="#4c72b0", label="mean count")
    ax.axhline(expected, color="#c44e52", lw=1)
    ax.set_xlabel("t")
    ax.set_ylabel("particles")
    ax.legend(frameon=False)
    return _save(fig, path)


def ulam_curve(ks, estimates, closed, direct: float | None, path) -> Path:
    fig, ax = plt.subplots(figsize=(4.5, 3))
    ax.plot(ks, closed, marker="o", color="#c44e52", label="closed form")
    ax.plot(ks, estimates, marker="s", color="#4c72b0", label="grid estimate")
    if direct is not None:
        ax.axhline(direct, color="black", ls="--", lw=1, label="direct")
    ax.axhline(2.0, color="#999999", lw=0.8)
    ax.set_xlabel("k")
    ax.set_ylabel("L / sqrt(n)")
    ax.legend(frameon=False)
    return _save(fig, path)


def diagram_figure(diagram: LineDiagram, points, path) -> Path:
    fig, ax = plt.subplots(figsize=(4, 4))
    for i, line in enumerate(diagram.lines):
        xs, ts = zip(*line.vertices)
        ax.plot(xs, ts, lw=1.5, color=plt.cm.tab10(i % 10))
    if points:
        px, pt = zip(*points)
        ax.scatter(px, pt, marker="x", color="black", s=20, zorder=3)
    ax.set_xlim(-0.5, diagram.n + 1.5)
    ax.set_ylim(-0.5, diagram.m + 1.5)
    ax.set_aspect("equal")
    ax.set_xlabel("x")
    ax.set_ylabel("t")
    return _save(fig, path)


def trajectory_figure(traj, path) -> Path:
    fig, ax = plt.subplots(figsize=(4, 4))
    ax.imshow(np.asarray(traj), origin="lower", cmap="Greys", aspect="auto", interpolation="nearest",
              extent=(0.5, traj.shape[1] + 0.5, -0.5, traj.shape[0] - 0.5))
    ax.set_xlabel("site")
    ax.set_ylabel("t")
    return _save(fig, path)
