"""PNG renderings of CLI results (eigenvalue curves, QQ plots, t_star trends).

Only used when the CLI is given ``--figures DIR``; the CSV files written next
to the figures hold the same data.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def _save(fig, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return path


def plot_eigen_curves(curve, path: Path, title: str | None = None) -> Path:
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(curve.t_grid, curve.values, color="tab:blue", lw=1)
    ax.axhline(0.0, color="k", lw=0.6)
    for t in curve.crossings:
        ax.axvline(t, color="tab:red", lw=0.6, ls="--")
    ax.set_xlabel("t")
    ax.set_ylabel("eigenvalues of L(t)")
    if title:
        ax.set_title(title)
    return _save(fig, Path(path))


def plot_qq(pairs: Sequence[tuple[float, float]], path: Path, reference: str = "normal") -> Path:
    x, y = np.asarray(pairs, dtype=float).T
    fig, ax = plt.subplots(figsize=(4.5, 4.5))
    ax.plot(x, y, ".", ms=3)
    lo, hi = min(x.min(), y.min()), max(x.max(), y.max())
    ax.plot([lo, hi], [lo, hi], color="k", lw=0.6)
    ax.set_xlabel(f"{reference} quantile")
    ax.set_ylabel("sample quantile")
    return _save(fig, Path(path))


def plot_histogram(values: Sequence[float], path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.hist(np.asarray(values, dtype=float), bins="auto", density=True)
    ax.set_xlabel("t_star")
    ax.set_ylabel("density")
    return _save(fig, Path(path))
