"""Distribution statistics: variance, recurrence, distances, spreading fits."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Line, PositionDistribution

__all__ = [
    "TimeSeries",
    "variance",
    "recurrence",
    "l1_distance",
    "fit_spreading_exponent",
    "detect_quasi_period",
    "normalized_variance",
]


@dataclass(frozen=True)
class TimeSeries:
    """Real values indexed by step t = 0..T."""

    values: np.ndarray
    label: str = ""

    def __post_init__(self) -> None:
        vals = np.array(self.values, dtype=np.float64)
        if vals.ndim != 1 or vals.size == 0:
            raise ValueError("time series must be a nonempty 1-D array")
        if not np.all(np.isfinite(vals)):
            raise ValueError("time series contains NaN or Inf")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return int(self.values.size)


def variance(dist: PositionDistribution) -> float:
    """Position variance; defined only on a line (signed coordinates)."""
    if not isinstance(dist.topology, Line):
        raise ValueError("variance needs signed positions; ring distributions are rejected")
    x = dist.topology.sites().astype(np.float64)
    mean = float(np.dot(x, dist.probs))
    return float(np.dot(x * x, dist.probs) - mean * mean)


def recurrence(dist: PositionDistribution) -> float:
    """Probability of finding the walker back at its starting site."""
    return dist.at_origin()


def l1_distance(p: PositionDistribution, q: PositionDistribution) -> float:
    """Total-variation distance: half the absolute-difference sum, in [0, 1]."""
    if p.topology != q.topology:
        raise ValueError("distributions live on different topologies")
    return 0.5 * float(np.sum(np.abs(p.probs - q.probs)))


def fit_spreading_exponent(
    sigma: TimeSeries, t_min: int, t_max: int
) -> dict[str, float]:
    """Least-squares slope of log(sigma) against log(t) over [t_min, t_max].

    Returns {"exponent", "r_squared"}.  Slope 1 means ballistic spreading,
    slope 1/2 diffusive.
    """
    if t_min < 1:
        raise ValueError("fit window must start at t >= 1 (log t undefined at 0)")
    if t_max >= len(sigma):
        raise ValueError(f"fit window end {t_max} beyond series length {len(sigma)}")
    if t_max - t_min + 1 < 3:
        raise ValueError("fit window must contain at least 3 points")
    t = np.arange(t_min, t_max + 1, dtype=np.float64)
    vals = sigma.values[t_min : t_max + 1]
    if np.any(vals <= 0.0):
        raise ValueError("sigma values must be positive on the fit window")
    log_t = np.log(t)
    log_s = np.log(vals)
    slope, intercept = np.polyfit(log_t, log_s, 1)
    fitted = slope * log_t + intercept
    ss_res = float(np.sum((log_s - fitted) ** 2))
    ss_tot = float(np.sum((log_s - log_s.mean()) ** 2))
    r_squared = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return {"exponent": float(slope), "r_squared": r_squared}


def detect_quasi_period(recurrence_series: TimeSeries, tau_max: int) -> dict[str, float]:
    """Candidate period with the highest mean recurrence at its multiples.

    Scans tau in [2, tau_max]; the score of tau is the mean of the series at
    t = tau, 2*tau, ... within range.  Ties break toward smaller tau.  Robust
    down to series as short as 2.5 periods, unlike autocorrelation peaks.
    """
    if tau_max < 2:
        raise ValueError(f"tau_max must be >= 2, got {tau_max}")
    if len(recurrence_series) < 2 * tau_max + 1:
        raise ValueError(
            f"series length {len(recurrence_series)} too short for tau_max={tau_max} "
            f"(need at least {2 * tau_max + 1})"
        )
    values = recurrence_series.values
    best_tau = 0
    best_score = -math.inf
    for tau in range(2, tau_max + 1):
        multiples = values[tau::tau]
        score = float(multiples.mean())
        if score > best_score:
            best_tau, best_score = tau, score
    return {"tau": best_tau, "score": best_score}


def normalized_variance(sigma2: TimeSeries) -> TimeSeries:
    """Series divided by its maximum over the reported window."""
    peak = float(sigma2.values.max())
    if peak <= 0.0:
        raise ValueError("cannot normalize an all-zero variance series")
    return TimeSeries(sigma2.values / peak, sigma2.label)
