"""Figure rendering for CLI reports.

Rendering is non-interactive (Agg) and deterministic: fixed dpi, fixed PNG
metadata, no timestamps, so repeated runs produce byte-identical files.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg", force=True)

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .core import PositionDistribution  # noqa: E402
from .metrics import TimeSeries  # noqa: E402
from .spectral import BandReport, Spectrum  # noqa: E402

_SAVE_OPTS = {"dpi": 150, "metadata": {"Software": "phasewalk"}}


def _finish(fig, path: Path) -> None:
    fig.tight_layout()
    fig.savefig(path, **_SAVE_OPTS)
    plt.close(fig)


def save_distribution_heatmap(
    dists: list[PositionDistribution], path: Path, title: str = ""
) -> None:
    """Position distribution per step as a step-by-site heat map."""
    grid = np.array([d.probs for d in dists])
    sites = dists[0].topology.sites()
    fig, ax = plt.subplots(figsize=(6, 4))
    mesh = ax.pcolormesh(
        np.append(sites - 0.5, sites[-1] + 0.5),
        np.arange(len(dists) + 1) - 0.5,
        grid,
        cmap="viridis",
    )
    fig.colorbar(mesh, ax=ax, label="probability")
    ax.set_xlabel("position x")
    ax.set_ylabel("step t")
    if title:
        ax.set_title(title)
    _finish(fig, path)


def save_distribution_bars(
    labeled: list[tuple[str, PositionDistribution]], path: Path, title: str = ""
) -> None:
    """Grouped bars of one or more distributions over the lattice."""
    fig, ax = plt.subplots(figsize=(6, 4))
    n = len(labeled)
    width = 0.8 / n
    for k, (label, dist) in enumerate(labeled):
        sites = dist.topology.sites()
        ax.bar(sites + (k - (n - 1) / 2) * width, dist.probs, width=width, label=label)
    ax.set_xlabel("position x")
    ax.set_ylabel("probability")
    if n > 1:
        ax.legend()
    if title:
        ax.set_title(title)
    _finish(fig, path)


def save_series(
    labeled: list[tuple[str, TimeSeries]], path: Path, ylabel: str, title: str = ""
) -> None:
    """One or more per-step series on a shared axis."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for label, series in labeled:
        ax.plot(np.arange(len(series)), series.values, marker="o", label=label)
    ax.set_xlabel("step t")
    ax.set_ylabel(ylabel)
    if len(labeled) > 1:
        ax.legend()
    if title:
        ax.set_title(title)
    _finish(fig, path)


def save_spectrum_scatter(
    spectrum: Spectrum, report: BandReport, band_ids: list[int], path: Path, title: str = ""
) -> None:
    """Quasi-energies against their momentum sector, colored by band."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ells = np.array([e.ell for e in spectrum.entries])
    energies = spectrum.energies()
    ids = np.array(band_ids)
    for band in range(report.n_bands):
        mask = ids == band
        ax.scatter(ells[mask], energies[mask], s=18, label=f"band {band}")
    ax.set_xlabel("momentum sector")
    ax.set_ylabel("quasi-energy")
    ax.set_ylim(-np.pi * 1.05, np.pi * 1.05)
    if report.n_bands > 1:
        ax.legend(fontsize="small")
    if title:
        ax.set_title(title)
    _finish(fig, path)
