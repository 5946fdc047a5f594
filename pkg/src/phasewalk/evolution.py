"""Step operator and multi-step evolution backends.

One step is a coin rotation followed by a coin-conditioned shift that picks
up the phase of the source site:

    coin 0 moves x -> x+1, coin 1 moves x -> x-1,
    both multiplied by exp(i*phi(x)).

Three backends share this step: exact pure-state evolution, a dense density
operator with a per-step position-dephasing channel, and Monte-Carlo
trajectories with per-step site-wise random phases.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .core import (
    CoinBias,
    DensityState,
    Line,
    PhaseProfile,
    PositionDistribution,
    PureState,
    Ring,
    Topology,
    check_profile_topology,
    distribution_of,
    phase_factors,
)

__all__ = [
    "WalkParams",
    "TrajectoryResult",
    "coin_matrix",
    "apply_coin",
    "apply_shift",
    "step",
    "evolve_pure",
    "step_operator_matrix",
    "apply_position_dephasing",
    "evolve_density",
    "classical_walk_oracle",
    "evolve_trajectories",
]

# Trajectories are reduced in fixed-size chunks so the result is bitwise
# independent of how many workers process them.
_TRAJ_CHUNK = 256


@dataclass(frozen=True)
class WalkParams:
    """Coin bias, phase profile and lattice for one walk."""

    coin: CoinBias
    profile: PhaseProfile
    topology: Topology

    def __post_init__(self) -> None:
        check_profile_topology(self.profile, self.topology)

    @cached_property
    def shift_factors(self) -> np.ndarray:
        """exp(i*phi(x)) per site, in index order."""
        return phase_factors(self.profile, self.topology)


def coin_matrix(coin: CoinBias) -> np.ndarray:
    """2x2 coin rotation [[cos, sin], [sin, -cos]].

    Real, symmetric and unitary with determinant -1, so it is an involution.
    """
    c = math.cos(coin.theta)
    s = math.sin(coin.theta)
    return np.array([[c, s], [s, -c]], dtype=np.complex128)


def apply_coin(state: PureState, coin: CoinBias) -> PureState:
    """Rotate the coin at every site."""
    mat = coin_matrix(coin)
    return PureState(state.amplitudes @ mat.T, state.topology)


def _shifted(amp: np.ndarray, factors: np.ndarray, topology: Topology) -> np.ndarray:
    """Shift amplitudes by the coin-conditioned translation with source phases."""
    out = np.zeros_like(amp)
    phased = amp * factors[:, None]
    if isinstance(topology, Ring):
        out[:, 0] = np.roll(phased[:, 0], 1)
        out[:, 1] = np.roll(phased[:, 1], -1)
        return out
    # Line: amplitude may not fall off either end.
    if amp[-1, 0] != 0.0 or amp[0, 1] != 0.0:
        raise ValueError(
            "state has support at the line boundary; t_max is too small for this walk"
        )
    out[1:, 0] = phased[:-1, 0]
    out[:-1, 1] = phased[1:, 1]
    return out


def apply_shift(state: PureState, params: WalkParams) -> PureState:
    """Coin-conditioned translation with the source-site phase."""
    if state.topology != params.topology:
        raise ValueError("state and params are bound to different topologies")
    return PureState(
        _shifted(state.amplitudes, params.shift_factors, state.topology), state.topology
    )


def step(state: PureState, params: WalkParams) -> PureState:
    """One walk step: coin rotation, then phased shift."""
    return apply_shift(apply_coin(state, params.coin), params)


def evolve_pure(initial: PureState, params: WalkParams, t: int) -> list[PureState]:
    """States after 0..t steps (t+1 entries, deterministic)."""
    if t < 0:
        raise ValueError(f"step count must be nonnegative, got {t}")
    if isinstance(params.topology, Line) and t > params.topology.t_max:
        raise ValueError(
            f"{t} steps exceed the line capacity t_max={params.topology.t_max}"
        )
    states = [initial]
    for _ in range(t):
        states.append(step(states[-1], params))
    return states


def step_operator_matrix(params: WalkParams) -> np.ndarray:
    """Dense matrix of one step in the flattened (site, coin) basis.

    On a ring this is unitary.  On a line the two columns that would push
    amplitude past the ends are zero; conjugation by it is exact as long as
    the state keeps off the boundary.
    """
    n = params.topology.n_sites
    c = math.cos(params.coin.theta)
    s = math.sin(params.coin.theta)
    factors = params.shift_factors
    mat = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    ring = isinstance(params.topology, Ring)
    for i in range(n):
        f = factors[i]
        # column for (site i, coin 0): coin keeps 0 with amp c, flips with s
        up = i + 1 if i + 1 < n else (0 if ring else None)
        down = i - 1 if i - 1 >= 0 else (n - 1 if ring else None)
        if up is not None:
            mat[2 * up + 0, 2 * i + 0] += f * c
            mat[2 * up + 0, 2 * i + 1] += f * s
        if down is not None:
            mat[2 * down + 1, 2 * i + 0] += f * s
            mat[2 * down + 1, 2 * i + 1] += f * (-c)
    return mat


def apply_position_dephasing(rho: DensityState, gamma: float) -> DensityState:
    """Damp every coherence between distinct sites by (1 - gamma).

    Same-site elements, including coin coherences, are untouched, so
    Hermiticity and trace are preserved exactly.
    """
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must lie in [0, 1], got {gamma}")
    if gamma == 0.0:
        return rho
    n = rho.n_sites
    site_of = np.repeat(np.arange(n), 2)
    same_site = site_of[:, None] == site_of[None, :]
    damp = np.where(same_site, 1.0, 1.0 - gamma)
    return DensityState(rho.matrix * damp, rho.topology)


def evolve_density(
    initial: DensityState, params: WalkParams, gamma: float, t: int
) -> list[DensityState]:
    """Density operators after 0..t steps of unitary step + dephasing."""
    if t < 0:
        raise ValueError(f"step count must be nonnegative, got {t}")
    if initial.topology != params.topology:
        raise ValueError("state and params are bound to different topologies")
    if isinstance(params.topology, Line) and t > params.topology.t_max:
        raise ValueError(
            f"{t} steps exceed the line capacity t_max={params.topology.t_max}"
        )
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must lie in [0, 1], got {gamma}")
    u = step_operator_matrix(params)
    u_dag = u.conj().T
    states = [initial]
    for _ in range(t):
        rho = u @ states[-1].matrix @ u_dag
        stepped = DensityState(rho, params.topology)
        states.append(apply_position_dephasing(stepped, gamma))
    return states


def classical_walk_oracle(
    coin: CoinBias, t: int, topology: Topology | None = None
) -> PositionDistribution:
    """Fully decohered reference walk, evolved exactly by dynamic programming.

    Markov chain on (site, coin): the coin is kept with probability
    cos^2(theta) and flipped with sin^2(theta); the walker then moves +1 for
    coin 0 and -1 for coin 1.  The initial coin is the even mixture (the
    symmetric coin state dephases to it).  No sampling is involved.
    """
    if t < 0:
        raise ValueError(f"step count must be nonnegative, got {t}")
    if topology is None:
        topology = Line(max(t, 1))
    if isinstance(topology, Line) and t > topology.t_max:
        raise ValueError(f"{t} steps exceed the line capacity t_max={topology.t_max}")
    keep = math.cos(coin.theta) ** 2
    flip = math.sin(coin.theta) ** 2
    n = topology.n_sites
    ring = isinstance(topology, Ring)
    dist = np.zeros((n, 2))
    dist[topology.origin_index, :] = 0.5
    for _ in range(t):
        # outcome coin decides the move: to coin 0 then +1, to coin 1 then -1
        to0 = keep * dist[:, 0] + flip * dist[:, 1]
        to1 = flip * dist[:, 0] + keep * dist[:, 1]
        nxt = np.zeros_like(dist)
        if ring:
            nxt[:, 0] = np.roll(to0, 1)
            nxt[:, 1] = np.roll(to1, -1)
        else:
            nxt[1:, 0] = to0[:-1]
            nxt[:-1, 1] = to1[1:]
        dist = nxt
    return PositionDistribution(dist.sum(axis=1), topology)


@dataclass(frozen=True)
class TrajectoryResult:
    """Ensemble average over phase-noise trajectories.

    ``distributions[t]`` is the mean position distribution after t steps and
    ``stderr[t]`` the per-site standard error of that mean.
    """

    distributions: list[PositionDistribution]
    stderr: np.ndarray
    n_traj: int
    seed: int
    eta: float


def _trajectory_noise(seed: int, index: int, t: int, n_sites: int, eta: float) -> np.ndarray:
    """Per-step, per-site uniform phases for one trajectory.

    Stream: Philox4x64 keyed by (seed, trajectory index), so trajectory i is
    the same no matter how work is scheduled.
    """
    key = np.array([seed, index], dtype=np.uint64)
    rng = np.random.Generator(np.random.Philox(key=key))
    bound = math.pi * eta
    return rng.uniform(-bound, bound, size=(t, n_sites))


def _chunk_sums(
    initial_amp: np.ndarray,
    coin_mat: np.ndarray,
    factors: np.ndarray,
    topology: Topology,
    eta: float,
    t: int,
    seed: int,
    start: int,
    size: int,
    anchor: np.ndarray | None,
) -> tuple[np.ndarray, np.ndarray]:
    """Per-chunk sums of distributions, as deviations from the anchor.

    Accumulating (p - anchor) instead of p keeps the variance estimate free of
    cancellation: sites where every trajectory agrees get exactly zero spread.
    """
    n = initial_amp.shape[0]
    amps = np.broadcast_to(initial_amp, (size, n, 2)).copy()
    noise = np.empty((size, t, n))
    for j in range(size):
        noise[j] = _trajectory_noise(seed, start + j, t, n, eta)
    s1 = np.zeros((t + 1, n))
    s2 = np.zeros((t + 1, n))

    def accumulate(step_index: int) -> None:
        probs = np.sum(np.abs(amps) ** 2, axis=2)
        if anchor is not None:
            probs = probs - anchor[step_index]
        s1[step_index] = probs.sum(axis=0)
        s2[step_index] = (probs * probs).sum(axis=0)

    accumulate(0)
    ring = isinstance(topology, Ring)
    for k in range(1, t + 1):
        amps = amps @ coin_mat.T
        phased = amps * factors[None, :, None]
        out = np.zeros_like(amps)
        if ring:
            out[:, :, 0] = np.roll(phased[:, :, 0], 1, axis=1)
            out[:, :, 1] = np.roll(phased[:, :, 1], -1, axis=1)
        else:
            out[:, 1:, 0] = phased[:, :-1, 0]
            out[:, :-1, 1] = phased[:, 1:, 1]
        amps = out * np.exp(1j * noise[:, k - 1, :])[:, :, None]
        accumulate(k)
    return s1, s2


def evolve_trajectories(
    initial: PureState,
    params: WalkParams,
    eta: float,
    t: int,
    n_traj: int,
    seed: int = 0,
    n_workers: int = 1,
) -> TrajectoryResult:
    """Monte-Carlo phase-noise ensemble: mean distributions plus standard errors.

    Each trajectory applies the unitary step and then site-wise phases
    exp(i*delta(x)) with delta i.i.d. uniform on [-pi*eta, pi*eta], drawn from
    a counter-based stream keyed by (seed, trajectory index).  Trajectories
    are reduced in fixed chunks, so output bytes do not depend on n_workers.
    """
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must lie in [0, 1], got {eta}")
    if n_traj < 1:
        raise ValueError(f"n_traj must be >= 1, got {n_traj}")
    if initial.topology != params.topology:
        raise ValueError("state and params are bound to different topologies")
    if isinstance(params.topology, Line) and t > params.topology.t_max:
        raise ValueError(
            f"{t} steps exceed the line capacity t_max={params.topology.t_max}"
        )
    coin_mat = coin_matrix(params.coin)
    factors = params.shift_factors
    # trajectory 0 anchors the deviation sums (and is re-run inside its chunk)
    anchor, _ = _chunk_sums(
        initial.amplitudes, coin_mat, factors, params.topology, eta, t, seed, 0, 1, None
    )
    chunks = [
        (start, min(_TRAJ_CHUNK, n_traj - start))
        for start in range(0, n_traj, _TRAJ_CHUNK)
    ]

    def run(chunk: tuple[int, int]) -> tuple[np.ndarray, np.ndarray]:
        start, size = chunk
        return _chunk_sums(
            initial.amplitudes, coin_mat, factors, params.topology, eta, t, seed, start, size, anchor
        )

    if n_workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            partials = list(pool.map(run, chunks))
    else:
        partials = [run(chunk) for chunk in chunks]

    n = initial.n_sites
    s1 = np.zeros((t + 1, n))
    s2 = np.zeros((t + 1, n))
    for p1, p2 in partials:  # fixed chunk order
        s1 += p1
        s2 += p2
    mean = anchor + s1 / n_traj
    if n_traj > 1:
        var = np.maximum(s2 - s1 * s1 / n_traj, 0.0) / (n_traj - 1)
        stderr = np.sqrt(var / n_traj)
    else:
        stderr = np.zeros_like(mean)
    dists = [PositionDistribution(mean[k], params.topology) for k in range(t + 1)]
    return TrajectoryResult(dists, stderr, n_traj, seed, eta)


def pure_distributions(initial: PureState, params: WalkParams, t: int) -> list[PositionDistribution]:
    """Convenience: distributions of evolve_pure."""
    return [distribution_of(s) for s in evolve_pure(initial, params, t)]
