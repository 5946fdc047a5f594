"""Quasi-energy spectra of the one-step walk operator on a ring.

The walk operator commutes with translation by the phase period p, so it
splits into n_sites/p blocks of size 2p indexed by a quasi-momentum label.
Dense diagonalization of the full operator serves as the ground truth; the
printed closed-form eigenvalue expression is evaluated verbatim but is
exploratory only (its root-branch convention is unstated), so residuals
against the numerical spectrum are reported, never asserted.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .core import Harmonic, Ring, Zero
from .evolution import WalkParams, step_operator_matrix

__all__ = [
    "SpectralLine",
    "Spectrum",
    "BandInfo",
    "BandReport",
    "build_step_unitary",
    "bloch_blocks",
    "quasi_energies",
    "closed_form_lambda",
    "closed_form_comparison",
    "band_analysis",
    "identity_proximity",
]

_UNITARITY_ATOL = 1e-12
_UNIMODULAR_ATOL = 1e-9
DEGENERACY_TOL = 1e-9


@dataclass(frozen=True)
class SpectralLine:
    """One quasi-energy with its momentum sector."""

    quasi_energy: float
    ell: int
    block_index: int


@dataclass(frozen=True)
class Spectrum:
    """All 2*n_sites quasi-energies, sorted by (ell, quasi_energy)."""

    entries: tuple[SpectralLine, ...]
    theta: float
    q: int
    p: int
    n_sites: int

    def __post_init__(self) -> None:
        if len(self.entries) != 2 * self.n_sites:
            raise ValueError(
                f"spectrum must hold {2 * self.n_sites} entries, got {len(self.entries)}"
            )

    def energies(self) -> np.ndarray:
        return np.array([e.quasi_energy for e in self.entries])


@dataclass(frozen=True)
class BandInfo:
    min_energy: float
    max_energy: float
    width: float
    member_count: int
    distinct_count: int


@dataclass(frozen=True)
class BandReport:
    """Gap-based clustering of quasi-energies on the circle."""

    n_bands: int
    bands: tuple[BandInfo, ...]
    max_degeneracy: int
    flagged: bool = False


def _profile_qp(params: WalkParams) -> tuple[int, int]:
    if isinstance(params.profile, Zero):
        return 0, 1
    if isinstance(params.profile, Harmonic):
        return params.profile.q, params.profile.p
    raise ValueError("spectral analysis requires a Harmonic or Zero phase profile")


def _require_ring(params: WalkParams) -> Ring:
    if not isinstance(params.topology, Ring):
        raise ValueError("spectral analysis is defined on ring topologies only")
    return params.topology


def build_step_unitary(params: WalkParams) -> np.ndarray:
    """Dense 2N x 2N one-step operator on a ring; checked unitary to 1e-12."""
    _require_ring(params)
    _profile_qp(params)
    u = step_operator_matrix(params)
    dim = u.shape[0]
    defect = np.max(np.abs(u.conj().T @ u - np.eye(dim)))
    if defect > _UNITARITY_ATOL:
        raise ValueError(f"step operator deviates from unitarity by {defect}")
    return u


def bloch_blocks(params: WalkParams) -> list[np.ndarray]:
    """Translation-symmetry reduction: N/p unitary blocks of size 2p x 2p.

    Block ell carries Bloch factor exp(2i*pi*ell*p/N) per cell crossed; the
    union of all block eigenvalues is the spectrum of the full operator.
    """
    ring = _require_ring(params)
    _, p = _profile_qp(params)
    n = ring.n_sites
    if n % p != 0:
        raise ValueError(f"phase period p={p} does not divide ring size {n}")
    n_cells = n // p
    u = build_step_unitary(params)
    # columns of U for source sites in cell 0, folded over target cells
    cols = u[:, : 2 * p].reshape(n_cells, 2 * p, 2 * p)  # [target cell, target in-cell, source]
    blocks = []
    for ell in range(n_cells):
        factors = np.exp(2j * math.pi * ell * p * np.arange(n_cells) / n)
        blocks.append(np.tensordot(factors, cols, axes=(0, 0)))
    return blocks


def _principal_angles(values: np.ndarray) -> np.ndarray:
    """Arguments mapped into (-pi, pi]."""
    angles = np.angle(values)
    return np.where(angles <= -math.pi, angles + 2.0 * math.pi, angles)


def quasi_energies(params: WalkParams) -> Spectrum:
    """Quasi-energy spectrum from dense diagonalization of the Bloch blocks."""
    ring = _require_ring(params)
    q, p = _profile_qp(params)
    entries: list[SpectralLine] = []
    for ell, block in enumerate(bloch_blocks(params)):
        eigenvalues = np.linalg.eigvals(block)
        moduli = np.abs(eigenvalues)
        if np.max(np.abs(moduli - 1.0)) > _UNIMODULAR_ATOL:
            raise ValueError(
                f"block {ell} produced non-unimodular eigenvalues; "
                "the eigensolver failed on a unitary input"
            )
        for idx, energy in enumerate(np.sort(_principal_angles(eigenvalues))):
            entries.append(SpectralLine(float(energy), ell, idx))
    return Spectrum(tuple(entries), params.coin.theta, q, p, ring.n_sites)


def closed_form_lambda(
    theta: float, q: int, p: int, n_sites: int, branch: int | None = None
) -> list[tuple[int, int, int, complex]]:
    """Printed closed-form eigenvalue expression, evaluated verbatim.

    Returns (ell, m, n, lambda) for ell = 0..N/p-1, m = 0..1, n = 0..p-1 with

        lambda = exp(2i*pi*n/p) * (2i*r*[(-1)^m * sqrt(1-r^2) - i*r]^(1/p) - 1),
        r = d^(p/2) * sin(pi*p*ell/N),  d = cos(theta).

    ``branch`` selects the p-th root branch: ``None`` is the principal branch,
    an integer b in [0, p) multiplies it by exp(2i*pi*b/p).  The expression is
    restricted to even p and carries no unimodularity guarantee.
    """
    if p % 2 != 0:
        raise ValueError(f"the closed form is restricted to even p, got p={p}")
    if n_sites % p != 0:
        raise ValueError(f"phase period p={p} does not divide ring size {n_sites}")
    if math.gcd(abs(q), p) != 1:
        raise ValueError(f"q={q} and p={p} must be co-prime")
    if branch is not None and not 0 <= branch < p:
        raise ValueError(f"branch index must lie in [0, {p}), got {branch}")
    d = math.cos(theta)
    d_eff = d ** (p / 2)
    rotate = 1.0 if branch is None else cmath.exp(2j * math.pi * branch / p)
    out: list[tuple[int, int, int, complex]] = []
    for ell in range(n_sites // p):
        r = d_eff * math.sin(math.pi * p * ell / n_sites)
        for m in (0, 1):
            inner = (-1) ** m * math.sqrt(max(1.0 - r * r, 0.0)) - 1j * r
            root = inner ** (1.0 / p) * rotate
            for n in range(p):
                lam = cmath.exp(2j * math.pi * n / p) * (2j * r * root - 1.0)
                out.append((ell, m, n, lam))
    return out


def closed_form_comparison(params: WalkParams) -> dict[str, dict[str, float]]:
    """Residuals of the closed form against the numerical spectrum, per branch.

    For each branch the sorted closed-form quasi-energies are matched against
    the sorted numerical ones; reported are the largest circular energy gap
    and the largest deviation of |lambda| from 1.  Recorded, never asserted.
    """
    ring = _require_ring(params)
    q, p = _profile_qp(params)
    reference = np.sort(quasi_energies(params).energies())
    report: dict[str, dict[str, float]] = {}
    for branch in [None] + list(range(p)):
        lams = np.array(
            [lam for (_, _, _, lam) in closed_form_lambda(params.coin.theta, q, p, ring.n_sites, branch)]
        )
        energies = np.sort(_principal_angles(lams))
        diff = np.abs(energies - reference)
        circular = np.minimum(diff, 2.0 * math.pi - diff)
        name = "principal" if branch is None else f"branch_{branch}"
        report[name] = {
            "energy_residual": float(np.max(circular)),
            "modulus_residual": float(np.max(np.abs(np.abs(lams) - 1.0))),
        }
    return report


def band_analysis(spectrum: Spectrum, n_bands: int, tol: float = DEGENERACY_TOL) -> BandReport:
    """Cluster quasi-energies into bands at the largest circular gaps.

    The n_bands largest gaps on the circle delimit the bands.  If those gaps
    do not stand clear of the remaining ones (factor 2), the parameters are
    outside the banded regime and a flagged single-band report is returned.
    """
    if n_bands < 1:
        raise ValueError(f"band count must be >= 1, got {n_bands}")
    if tol <= 0.0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    energies = np.sort(spectrum.energies())
    count = energies.size
    gaps = np.diff(energies, append=energies[0] + 2.0 * math.pi)
    order = np.argsort(gaps)[::-1]
    boundary = np.sort(order[:n_bands])
    if n_bands < count:
        smallest_boundary = gaps[order[n_bands - 1]]
        largest_internal = gaps[order[n_bands]] if n_bands < count else 0.0
        clear = smallest_boundary > 2.0 * largest_internal
    else:
        clear = True
    if n_bands > 1 and not clear:
        width = float(energies[-1] - energies[0])
        info = BandInfo(
            float(energies[0]),
            float(energies[-1]),
            width,
            count,
            _distinct_count(energies, tol),
            )
        return BandReport(1, (info,), _max_multiplicity(energies, tol), flagged=True)
    bands: list[BandInfo] = []
    max_multiplicity = 1
    for k in range(n_bands):
        start = (boundary[k - 1] + 1) % count  # first member after the previous gap
        stop = boundary[k]  # last member before this gap
        if start <= stop:
            members = energies[start : stop + 1]
        else:  # band wraps the -pi/pi seam
            members = np.concatenate([energies[start:] - 2.0 * math.pi, energies[: stop + 1]])
        bands.append(
            BandInfo(
                float(members[0]),
                float(members[-1]),
                float(members[-1] - members[0]),
                int(members.size),
                _distinct_count(members, tol),
            )
        )
        max_multiplicity = max(max_multiplicity, _max_multiplicity(members, tol))
    bands.sort(key=lambda b: b.min_energy)
    return BandReport(n_bands, tuple(bands), max_multiplicity)


def _distinct_count(sorted_energies: np.ndarray, tol: float) -> int:
    if sorted_energies.size == 0:
        return 0
    return 1 + int(np.sum(np.diff(sorted_energies) > tol))


def _max_multiplicity(sorted_energies: np.ndarray, tol: float) -> int:
    best = 1
    run = 1
    for gap in np.diff(sorted_energies):
        run = run + 1 if gap <= tol else 1
        best = max(best, run)
    return best


def identity_proximity(params: WalkParams, p: int | None = None) -> float:
    """|trace(U^p)| / dim: 1 exactly when U^p is a global phase times identity.

    Values near 1 signal a quasi-revival of any initial state every p steps.
    ``p`` defaults to the phase-profile period.
    """
    ring = _require_ring(params)
    if p is None:
        _, p = _profile_qp(params)
    if p < 1:
        raise ValueError(f"power must be >= 1, got {p}")
    u = build_step_unitary(params)
    powered = np.linalg.matrix_power(u, p)
    return float(abs(np.trace(powered)) / (2 * ring.n_sites))
