"""Domain types for one-dimensional coined walks with site-dependent phases.

States live on a lattice of (site, coin) pairs with coin values 0 and 1.
Amplitude arrays are indexed ``[site_index, coin]``; density matrices use the
flattened index ``2 * site_index + coin``.  All types validate their
invariants at construction and are treated as immutable afterwards.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "CoinBias",
    "Harmonic",
    "Table",
    "Zero",
    "PhaseProfile",
    "Line",
    "Ring",
    "Topology",
    "PureState",
    "DensityState",
    "PositionDistribution",
    "DecoherenceConfig",
    "make_symmetric_initial",
    "make_initial",
    "phase_at",
    "phase_factors",
    "distribution_of",
    "dephasing_equivalent_gamma",
]

TWO_PI = 2.0 * math.pi

# Probabilities with magnitude below this are floating-point dust and are
# clamped to zero before any normalization check.
PROB_DUST = 1e-15

# Dense density-matrix storage is refused above this dimension.
MAX_DENSITY_DIM = 1024

_NORM_ATOL = 1e-10
_TRACE_ATOL = 1e-10
_HERM_ATOL = 1e-10
_DIAG_ATOL = 1e-12
_DIST_SUM_ATOL = 1e-9


# ---------------------------------------------------------------------------
# Topology
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Line:
    """Open segment of sites x = -t_max .. +t_max.

    One step moves the walker by one site, so the window is exact (not a
    truncation) for any walk of at most ``t_max`` steps started at the origin.
    """

    t_max: int

    def __post_init__(self) -> None:
        if not isinstance(self.t_max, int) or self.t_max < 1:
            raise ValueError(f"Line requires integer t_max >= 1, got {self.t_max!r}")

    @property
    def n_sites(self) -> int:
        return 2 * self.t_max + 1

    @property
    def origin_index(self) -> int:
        return self.t_max

    def sites(self) -> np.ndarray:
        """Signed site coordinates, in index order."""
        return np.arange(-self.t_max, self.t_max + 1)

    def index_of(self, site: int) -> int:
        if not -self.t_max <= site <= self.t_max:
            raise ValueError(f"site {site} outside line [-{self.t_max}, {self.t_max}]")
        return site + self.t_max


@dataclass(frozen=True)
class Ring:
    """Periodic lattice of ``n_sites`` sites labelled 0 .. n_sites - 1."""

    n_sites: int

    def __post_init__(self) -> None:
        if not isinstance(self.n_sites, int) or self.n_sites < 2:
            raise ValueError(f"Ring requires integer n_sites >= 2, got {self.n_sites!r}")

    @property
    def origin_index(self) -> int:
        return 0

    def sites(self) -> np.ndarray:
        return np.arange(self.n_sites)

    def index_of(self, site: int) -> int:
        if not 0 <= site < self.n_sites:
            raise ValueError(f"site {site} outside ring [0, {self.n_sites})")
        return site


Topology = Line | Ring


# ---------------------------------------------------------------------------
# Coin bias
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CoinBias:
    """Coin rotation angle theta in [0, pi/2].

    The derived tunneling amplitude d = cos(theta) controls how strongly the
    walker leaks between potential wells: d = 1 is the diabatic extreme,
    d = 0 the adiabatic (flat-band) extreme.
    """

    theta: float

    def __post_init__(self) -> None:
        theta = float(self.theta)
        if not 0.0 <= theta <= math.pi / 2:
            raise ValueError(f"coin bias theta must lie in [0, pi/2], got {theta}")
        object.__setattr__(self, "theta", theta)

    @property
    def tunneling(self) -> float:
        """Tunneling amplitude d = cos(theta), in [0, 1]."""
        return math.cos(self.theta)


# ---------------------------------------------------------------------------
# Phase profiles
# ---------------------------------------------------------------------------


def _reduce_phase(value: float) -> float:
    """Reduce an angle to [0, 2*pi)."""
    out = math.fmod(value, TWO_PI)
    if out < 0.0:
        out += TWO_PI
    if out >= TWO_PI:  # fmod rounding can land exactly on 2*pi
        out = 0.0
    return out


@dataclass(frozen=True)
class Harmonic:
    """Harmonic phase profile phi(x) = 2*pi*x*q/p with q, p co-prime.

    q = 0 is only co-prime with p = 1 and reproduces the zero-phase walk.
    """

    q: int
    p: int

    def __post_init__(self) -> None:
        if not isinstance(self.q, int) or not isinstance(self.p, int):
            raise ValueError("Harmonic q and p must be integers")
        if self.p < 1:
            raise ValueError(f"Harmonic requires p >= 1, got p={self.p}")
        if self.q < 0:
            raise ValueError(f"Harmonic requires q >= 0, got q={self.q}")
        if math.gcd(abs(self.q), self.p) != 1:
            raise ValueError(
                f"Harmonic requires gcd(|q|, p) = 1, got q={self.q}, p={self.p}"
            )


@dataclass(frozen=True)
class Table:
    """Explicit per-site phases; entry i belongs to site first_site + i.

    Stored values are reduced to [0, 2*pi) at construction.
    """

    phases: tuple[float, ...]
    first_site: int = 0

    def __post_init__(self) -> None:
        if len(self.phases) == 0:
            raise ValueError("Table requires at least one phase entry")
        reduced = tuple(_reduce_phase(float(v)) for v in self.phases)
        object.__setattr__(self, "phases", reduced)


@dataclass(frozen=True)
class Zero:
    """Identically zero phase profile (the standard walk)."""


PhaseProfile = Harmonic | Table | Zero


def phase_at(profile: PhaseProfile, site: int) -> float:
    """Phase phi(site) in [0, 2*pi).

    For Harmonic profiles the reduction (q * site) mod p is done in integer
    arithmetic so large sites lose no precision.
    """
    if isinstance(profile, Zero):
        return 0.0
    if isinstance(profile, Harmonic):
        residue = (profile.q * site) % profile.p
        return TWO_PI * residue / profile.p
    idx = site - profile.first_site
    if not 0 <= idx < len(profile.phases):
        raise ValueError(
            f"site {site} outside table range "
            f"[{profile.first_site}, {profile.first_site + len(profile.phases)})"
        )
    return profile.phases[idx]


def check_profile_topology(profile: PhaseProfile, topology: Topology) -> None:
    """Reject profile/topology pairs that cannot be bound together."""
    if isinstance(profile, Harmonic) and isinstance(topology, Ring):
        if topology.n_sites % profile.p != 0:
            raise ValueError(
                f"ring size {topology.n_sites} not divisible by phase period p={profile.p}"
            )
    if isinstance(profile, Table):
        sites = topology.sites()
        if profile.first_site != int(sites[0]) or len(profile.phases) != len(sites):
            raise ValueError(
                "table profile must provide one phase per lattice site "
                f"(expected {len(sites)} entries starting at site {int(sites[0])})"
            )


def phase_factors(profile: PhaseProfile, topology: Topology) -> np.ndarray:
    """exp(i*phi(x)) for every site of the topology, in index order."""
    check_profile_topology(profile, topology)
    phases = np.array([phase_at(profile, int(x)) for x in topology.sites()])
    return np.exp(1j * phases)


# ---------------------------------------------------------------------------
# States
# ---------------------------------------------------------------------------


def _frozen_array(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class PureState:
    """Walker-coin wavefunction: complex amplitudes indexed [site, coin]."""

    amplitudes: np.ndarray
    topology: Topology

    def __post_init__(self) -> None:
        amp = np.array(self.amplitudes, dtype=np.complex128)
        expected = (self.topology.n_sites, 2)
        if amp.shape != expected:
            raise ValueError(f"amplitude array must have shape {expected}, got {amp.shape}")
        norm = float(np.sum(np.abs(amp) ** 2))
        if abs(norm - 1.0) > _NORM_ATOL:
            raise ValueError(f"state norm {norm} deviates from 1 by more than {_NORM_ATOL}")
        object.__setattr__(self, "amplitudes", _frozen_array(amp))

    @property
    def n_sites(self) -> int:
        return self.topology.n_sites


@dataclass(frozen=True)
class DensityState:
    """Density operator over (site, coin), flattened index 2*site_index + coin.

    Dense storage only; the dimension guard keeps memory use at desk scale.
    """

    matrix: np.ndarray
    topology: Topology

    def __post_init__(self) -> None:
        rho = np.array(self.matrix, dtype=np.complex128)
        dim = 2 * self.topology.n_sites
        if rho.shape != (dim, dim):
            raise ValueError(f"density matrix must have shape ({dim}, {dim}), got {rho.shape}")
        if dim > MAX_DENSITY_DIM:
            raise ValueError(
                f"density dimension {dim} exceeds the dense-storage guard {MAX_DENSITY_DIM}"
            )
        if not np.allclose(rho, rho.conj().T, rtol=0.0, atol=_HERM_ATOL):
            raise ValueError("density matrix is not Hermitian within 1e-10")
        trace = complex(np.trace(rho))
        if abs(trace - 1.0) > _TRACE_ATOL:
            raise ValueError(f"density trace {trace} deviates from 1 by more than {_TRACE_ATOL}")
        diag = np.diagonal(rho)
        if np.any(diag.real < -_DIAG_ATOL) or np.any(np.abs(diag.imag) > _DIAG_ATOL):
            raise ValueError("density diagonal must be real and nonnegative within 1e-12")
        object.__setattr__(self, "matrix", _frozen_array(rho))

    @property
    def n_sites(self) -> int:
        return self.topology.n_sites

    @classmethod
    def from_pure(cls, state: PureState) -> "DensityState":
        """Projector |psi><psi| of a pure state."""
        vec = state.amplitudes.reshape(-1)
        return cls(np.outer(vec, vec.conj()), state.topology)


@dataclass(frozen=True)
class PositionDistribution:
    """Probability over lattice sites, coin traced out."""

    probs: np.ndarray
    topology: Topology

    def __post_init__(self) -> None:
        probs = np.array(self.probs, dtype=np.float64)
        if probs.shape != (self.topology.n_sites,):
            raise ValueError(
                f"probability array must have shape ({self.topology.n_sites},), got {probs.shape}"
            )
        probs[np.abs(probs) < PROB_DUST] = 0.0
        if np.any(probs < 0.0):
            raise ValueError("probabilities must be nonnegative")
        total = float(probs.sum())
        if abs(total - 1.0) > _DIST_SUM_ATOL:
            raise ValueError(f"probabilities sum to {total}, expected 1 within {_DIST_SUM_ATOL}")
        object.__setattr__(self, "probs", _frozen_array(probs))

    def at_origin(self) -> float:
        return float(self.probs[self.topology.origin_index])


# ---------------------------------------------------------------------------
# Decoherence configuration
# ---------------------------------------------------------------------------


def dephasing_equivalent_gamma(eta: float) -> float:
    """Density-channel strength matching phase-noise amplitude eta on average.

    Independent uniform phases delta ~ U[-pi*eta, pi*eta] per site per step
    damp every inter-site coherence by |E[exp(i*delta)]|^2 = sinc^2(pi*eta),
    so the matching channel has 1 - gamma = sinc^2(pi*eta).
    """
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must lie in [0, 1], got {eta}")
    z = math.pi * eta
    sinc = 1.0 if z == 0.0 else math.sin(z) / z
    return 1.0 - sinc * sinc


@dataclass(frozen=True)
class DecoherenceConfig:
    """Noise knobs: gamma drives the density backend, eta the trajectories.

    gamma = 0 and eta = 0 both mean fully coherent evolution.  The two
    backends agree on ensemble averages when gamma = 1 - sinc^2(pi*eta).
    """

    gamma: float = 0.0
    eta: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError(f"gamma must lie in [0, 1], got {self.gamma}")
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError(f"eta must lie in [0, 1], got {self.eta}")

    def matched_gamma(self) -> float:
        """gamma equivalent to this eta under the sinc^2 bridge."""
        return dephasing_equivalent_gamma(self.eta)


# ---------------------------------------------------------------------------
# State constructors and readout
# ---------------------------------------------------------------------------


def make_symmetric_initial(topology: Topology) -> PureState:
    """Walker at the origin with coin (|0> + i|1>)/sqrt(2).

    This coin state produces a left-right symmetric position distribution
    under the zero-phase walk for every coin bias.
    """
    amp = np.zeros((topology.n_sites, 2), dtype=np.complex128)
    amp[topology.origin_index, 0] = 1.0 / math.sqrt(2.0)
    amp[topology.origin_index, 1] = 1j / math.sqrt(2.0)
    return PureState(amp, topology)


def make_initial(
    topology: Topology, coin_amp0: complex, coin_amp1: complex, site: int
) -> PureState:
    """Localized walker at ``site`` with the given coin amplitudes."""
    weight = abs(coin_amp0) ** 2 + abs(coin_amp1) ** 2
    if abs(weight - 1.0) > _NORM_ATOL:
        raise ValueError(f"coin amplitudes must be normalized, |a0|^2+|a1|^2 = {weight}")
    idx = topology.index_of(site)
    amp = np.zeros((topology.n_sites, 2), dtype=np.complex128)
    amp[idx, 0] = coin_amp0
    amp[idx, 1] = coin_amp1
    return PureState(amp, topology)


def distribution_of(state: PureState | DensityState) -> PositionDistribution:
    """Position distribution with the coin traced out."""
    if isinstance(state, PureState):
        probs = np.sum(np.abs(state.amplitudes) ** 2, axis=1)
    else:
        diag = np.diagonal(state.matrix).real
        probs = diag.reshape(-1, 2).sum(axis=1)
    return PositionDistribution(probs, state.topology)
